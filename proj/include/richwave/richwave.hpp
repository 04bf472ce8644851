#pragma once

#include "richwave/asymptotics.hpp"
#include "richwave/errors.hpp"
#include "richwave/format.hpp"
#include "richwave/fv_oracle.hpp"
#include "richwave/lagrangian.hpp"
#include "richwave/monotone_map.hpp"
#include "richwave/plateau.hpp"
#include "richwave/profile.hpp"
#include "richwave/quadrature.hpp"
#include "richwave/stability.hpp"
#include "richwave/state.hpp"
#include "richwave/system.hpp"
