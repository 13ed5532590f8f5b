#pragma once

#include "qapcert/assignment.hpp"
#include "qapcert/certify.hpp"
#include "qapcert/core.hpp"
#include "qapcert/duality.hpp"
#include "qapcert/experiments.hpp"
#include "qapcert/io.hpp"
#include "qapcert/linalg.hpp"
#include "qapcert/lp.hpp"
#include "qapcert/matrix.hpp"
#include "qapcert/oracle.hpp"
#include "qapcert/rng.hpp"
#include "qapcert/sdp.hpp"
