#pragma once

#include "stepharm/config.hpp"
#include "stepharm/errors.hpp"
#include "stepharm/hermite_contour.hpp"
#include "stepharm/oracle.hpp"
#include "stepharm/parallel.hpp"
#include "stepharm/quadrature.hpp"
#include "stepharm/scattering.hpp"
#include "stepharm/special_fn.hpp"
#include "stepharm/spectrum.hpp"
#include "stepharm/verify.hpp"
#include "stepharm/wavepacket.hpp"
