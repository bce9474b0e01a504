#pragma once

#include "hypgeo/boundary.hpp"
#include "hypgeo/busemann.hpp"
#include "hypgeo/error.hpp"
#include "hypgeo/hyperbolicity.hpp"
#include "hypgeo/io.hpp"
#include "hypgeo/maps.hpp"
#include "hypgeo/metric_space.hpp"
#include "hypgeo/parallel.hpp"
#include "hypgeo/quasihyperbolize.hpp"
#include "hypgeo/report.hpp"
#include "hypgeo/suite.hpp"
#include "hypgeo/uniformize.hpp"
#include "hypgeo/zoo.hpp"
