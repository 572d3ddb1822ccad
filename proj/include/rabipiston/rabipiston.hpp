#ifndef RABIPISTON_RABIPISTON_HPP
#define RABIPISTON_RABIPISTON_HPP

#include "rabipiston/control.hpp"
#include "rabipiston/errors.hpp"
#include "rabipiston/gpe.hpp"
#include "rabipiston/grid.hpp"
#include "rabipiston/observables.hpp"
#include "rabipiston/params.hpp"
#include "rabipiston/piston.hpp"
#include "rabipiston/potentials.hpp"
#include "rabipiston/pressure.hpp"
#include "rabipiston/report.hpp"
#include "rabipiston/schedule.hpp"
#include "rabipiston/spinor.hpp"
#include "rabipiston/surface.hpp"
#include "rabipiston/trial.hpp"
#include "rabipiston/version.hpp"

#endif
