#ifndef CCALE_CCALE_HPP
#define CCALE_CCALE_HPP

#include "ccale/cases.hpp"
#include "ccale/config.hpp"
#include "ccale/driver.hpp"
#include "ccale/eos.hpp"
#include "ccale/error.hpp"
#include "ccale/lagrange.hpp"
#include "ccale/mesh.hpp"
#include "ccale/mesh_io.hpp"
#include "ccale/mof.hpp"
#include "ccale/mof_static.hpp"
#include "ccale/output.hpp"
#include "ccale/polygon.hpp"
#include "ccale/remap.hpp"
#include "ccale/rezone.hpp"
#include "ccale/sedov.hpp"
#include "ccale/state.hpp"
#include "ccale/vec2.hpp"

#endif  // CCALE_CCALE_HPP
