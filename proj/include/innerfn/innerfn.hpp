#pragma once

#include "innerfn/common.hpp"
#include "innerfn/experiment.hpp"
#include "innerfn/inner.hpp"
#include "innerfn/io.hpp"
#include "innerfn/norms.hpp"
#include "innerfn/verify.hpp"
#include "innerfn/weights.hpp"
#include "innerfn/zeros.hpp"
