#pragma once

#include "errors.hpp"
#include "summation.hpp"
#include "kernel.hpp"
#include "point_set.hpp"
#include "manifold.hpp"
#include "energy.hpp"
#include "discrepancy.hpp"
#include "paircorr.hpp"
#include "sequences.hpp"
