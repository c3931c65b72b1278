// vacdet.hpp — umbrella header

#pragma once

#include "vacdet/analytic.hpp"
#include "vacdet/cavity.hpp"
#include "vacdet/kernels.hpp"
#include "vacdet/model.hpp"
#include "vacdet/observables.hpp"
#include "vacdet/oracle.hpp"
#include "vacdet/result.hpp"
