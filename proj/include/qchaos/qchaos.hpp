#pragma once

#include "qchaos/types.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/torus.hpp"
#include "qchaos/symplectic.hpp"
#include "qchaos/classical.hpp"
#include "qchaos/quantum_maps.hpp"
#include "qchaos/phase_space.hpp"
#include "qchaos/eigen_stats.hpp"
#include "qchaos/scar_lab.hpp"
#include "qchaos/bessel.hpp"
#include "qchaos/random_waves.hpp"
#include "qchaos/observable_parser.hpp"
#include "qchaos/io.hpp"
