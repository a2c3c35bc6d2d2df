#pragma once

#include "dampath/classical.hpp"
#include "dampath/commands.hpp"
#include "dampath/config.hpp"
#include "dampath/core.hpp"
#include "dampath/finite_difference.hpp"
#include "dampath/geometry.hpp"
#include "dampath/kernel.hpp"
#include "dampath/ode.hpp"
#include "dampath/quadrature.hpp"
#include "dampath/verify.hpp"
#include "dampath/version.hpp"
#include "dampath/wavepacket.hpp"
