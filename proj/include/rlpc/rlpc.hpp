#ifndef RLPC_RLPC_HPP
#define RLPC_RLPC_HPP

#include "rlpc/analysis.hpp"
#include "rlpc/estimator.hpp"
#include "rlpc/gabidulin.hpp"
#include "rlpc/gf.hpp"
#include "rlpc/linalg.hpp"
#include "rlpc/pkc.hpp"
#include "rlpc/rankmat.hpp"
#include "rlpc/semilinear.hpp"

#endif
