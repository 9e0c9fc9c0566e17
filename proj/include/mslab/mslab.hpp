#pragma once

#include "mslab/errors.hpp"
#include "mslab/rng.hpp"
#include "mslab/inner.hpp"
#include "mslab/clark.hpp"
#include "mslab/quadrature.hpp"
#include "mslab/modelspace.hpp"
#include "mslab/qop.hpp"
#include "mslab/spectral.hpp"
#include "mslab/report.hpp"
#include "mslab/parallel.hpp"
#include "mslab/verify.hpp"
