#pragma once

#include "hsm/mat2.hpp"
#include "hsm/h3geom.hpp"
#include "hsm/rational.hpp"
#include "hsm/polynomial.hpp"
#include "hsm/hgde.hpp"
#include "hsm/mobius.hpp"
#include "hsm/polyhedral.hpp"
#include "hsm/theta.hpp"
#include "hsm/inverse_map.hpp"
#include "hsm/tiling.hpp"
#include "hsm/frontmap.hpp"
#include "hsm/singular.hpp"
#include "hsm/mesh.hpp"
#include "hsm/selfcheck.hpp"
