#pragma once

#include "starframes/algebra.hpp"
#include "starframes/duals.hpp"
#include "starframes/errors.hpp"
#include "starframes/frames.hpp"
#include "starframes/io.hpp"
#include "starframes/module_space.hpp"
#include "starframes/random.hpp"
#include "starframes/tensor.hpp"
#include "starframes/tolerances.hpp"
