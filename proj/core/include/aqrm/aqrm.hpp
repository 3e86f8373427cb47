#pragma once

#include "aqrm/bethe.hpp"
#include "aqrm/constraint.hpp"
#include "aqrm/errors.hpp"
#include "aqrm/model.hpp"
#include "aqrm/potentials.hpp"
#include "aqrm/schrodinger.hpp"
