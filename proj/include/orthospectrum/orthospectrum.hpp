#pragma once

#include "bounds.hpp"
#include "f_function.hpp"
#include "m_function.hpp"
#include "quadrature.hpp"
#include "selftest.hpp"
#include "special_functions.hpp"
#include "spectrum.hpp"
#include "sweep.hpp"
