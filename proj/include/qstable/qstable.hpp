#pragma once

#include "counting.hpp"
#include "dim_vector.hpp"
#include "errors.hpp"
#include "expansion.hpp"
#include "number_theory.hpp"
#include "qfield.hpp"
#include "quiver.hpp"
#include "series.hpp"
