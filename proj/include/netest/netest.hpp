#pragma once

#include "netest/error.hpp"
#include "netest/netcore.hpp"
#include "netest/io.hpp"
#include "netest/metrics.hpp"
#include "netest/gradients.hpp"
#include "netest/estimators.hpp"
#include "netest/generators.hpp"
#include "netest/evalio.hpp"
#include "netest/config.hpp"
