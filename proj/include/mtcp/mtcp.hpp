#ifndef MTCP_MTCP_HPP
#define MTCP_MTCP_HPP

#include "mtcp/core.hpp"
#include "mtcp/covariance.hpp"
#include "mtcp/direct.hpp"
#include "mtcp/error.hpp"
#include "mtcp/estimate.hpp"
#include "mtcp/factors.hpp"
#include "mtcp/forecast.hpp"
#include "mtcp/io.hpp"
#include "mtcp/linalg.hpp"
#include "mtcp/metrics.hpp"
#include "mtcp/proxy.hpp"
#include "mtcp/random.hpp"
#include "mtcp/rank.hpp"
#include "mtcp/refined.hpp"
#include "mtcp/simulation.hpp"

#endif  // MTCP_MTCP_HPP
