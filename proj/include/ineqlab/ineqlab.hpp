#pragma once

#include "ineqlab/numeric.hpp"
#include "ineqlab/sequence.hpp"
#include "ineqlab/optim.hpp"
#include "ineqlab/bounds.hpp"
#include "ineqlab/search.hpp"
#include "ineqlab/lemmas.hpp"
