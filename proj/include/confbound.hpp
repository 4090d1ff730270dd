#pragma once

#include "confbound/precision.hpp"
#include "confbound/geometry.hpp"
#include "confbound/dual.hpp"
#include "confbound/expr.hpp"
#include "confbound/maps.hpp"
#include "confbound/extrapolation.hpp"
#include "confbound/path.hpp"
#include "confbound/distortion.hpp"
#include "confbound/conditions.hpp"
#include "confbound/kernel.hpp"
#include "confbound/boundary.hpp"
#include "confbound/dynamics.hpp"
#include "confbound/config.hpp"
#include "confbound/report.hpp"
#include "confbound/acceptance.hpp"
