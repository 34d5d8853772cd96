#pragma once

#include "version.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "combinat.hpp"
#include "meixner.hpp"
#include "skewpoly.hpp"
#include "pfaffian.hpp"
#include "fredholm.hpp"
#include "finite_kernel.hpp"
#include "bessel_kernel.hpp"
#include "airy_kernel.hpp"
#include "montecarlo.hpp"
