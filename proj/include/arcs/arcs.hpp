#pragma once

// Umbrella header.

#include "arcs/arc_model.hpp"
#include "arcs/certificate.hpp"
#include "arcs/errors.hpp"
#include "arcs/geometry.hpp"
#include "arcs/ilp.hpp"
#include "arcs/modular.hpp"
#include "arcs/render.hpp"
#include "arcs/solver.hpp"
