#pragma once

#include "mwca/analysis.hpp"
#include "mwca/decompose.hpp"
#include "mwca/metric.hpp"
#include "mwca/tensor.hpp"
