#pragma once

#include "hyperstab/certificate.hpp"
#include "hyperstab/certify.hpp"
#include "hyperstab/constructions.hpp"
#include "hyperstab/core.hpp"
#include "hyperstab/error.hpp"
#include "hyperstab/hom.hpp"
#include "hyperstab/lagrangian.hpp"
#include "hyperstab/oracles.hpp"
#include "hyperstab/rational.hpp"
#include "hyperstab/rng.hpp"
#include "hyperstab/stability.hpp"
