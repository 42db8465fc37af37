#pragma once

// Exact arithmetic in Q(q).
#include "qpoly.hpp"
#include "rational_function.hpp"
