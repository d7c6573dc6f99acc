#pragma once

#include "qsurvey/errors.hpp"
#include "qsurvey/hilbert.hpp"
#include "qsurvey/quadrature.hpp"
#include "qsurvey/rng.hpp"
#include "qsurvey/su2.hpp"
#include "qsurvey/weyl_heisenberg.hpp"
#include "qsurvey/metric.hpp"
#include "qsurvey/bell.hpp"
#include "qsurvey/hidden_variable.hpp"
#include "qsurvey/report.hpp"
#include "qsurvey/suites.hpp"
