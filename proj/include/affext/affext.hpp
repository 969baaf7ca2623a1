#pragma once

#include "affext/analysis.hpp"
#include "affext/errors.hpp"
#include "affext/extractor.hpp"
#include "affext/field.hpp"
#include "affext/numtheory.hpp"
#include "affext/random.hpp"
#include "affext/spec_io.hpp"
#include "affext/subspace.hpp"
#include "affext/verify.hpp"
