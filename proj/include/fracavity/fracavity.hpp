#ifndef FRACAVITY_FRACAVITY_HPP
#define FRACAVITY_FRACAVITY_HPP

#include "fracavity/airy.hpp"
#include "fracavity/cavity.hpp"
#include "fracavity/config.hpp"
#include "fracavity/errors.hpp"
#include "fracavity/fft.hpp"
#include "fracavity/fractional.hpp"
#include "fracavity/grid.hpp"
#include "fracavity/io.hpp"
#include "fracavity/lf_transform.hpp"
#include "fracavity/modesolver.hpp"
#include "fracavity/oracle.hpp"
#include "fracavity/propagator.hpp"
#include "fracavity/runner.hpp"
#include "fracavity/tridiag.hpp"
#include "fracavity/version.hpp"

#endif  // FRACAVITY_FRACAVITY_HPP
