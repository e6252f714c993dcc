#ifndef VCALC_VCALC_HPP
#define VCALC_VCALC_HPP

#include "vcalc/errors.hpp"
#include "vcalc/rounding.hpp"
#include "vcalc/rational.hpp"
#include "vcalc/bounds.hpp"
#include "vcalc/logic.hpp"
#include "vcalc/format.hpp"
#include "vcalc/linear_algebra.hpp"
#include "vcalc/multi_index.hpp"
#include "vcalc/algebra.hpp"
#include "vcalc/series.hpp"
#include "vcalc/differential.hpp"
#include "vcalc/elementary.hpp"
#include "vcalc/taylor_model.hpp"
#include "vcalc/expression.hpp"
#include "vcalc/function_patch.hpp"
#include "vcalc/solvers.hpp"
#include "vcalc/integrators.hpp"
#include "vcalc/serialization.hpp"

#endif
