#pragma once

#include "gaussgap/error.hpp"
#include "gaussgap/linalg.hpp"
#include "gaussgap/realops.hpp"
#include "gaussgap/model.hpp"
#include "gaussgap/stationary.hpp"
#include "gaussgap/gap.hpp"
#include "gaussgap/dynamics.hpp"
#include "gaussgap/classical.hpp"
#include "gaussgap/fock_oracle.hpp"
#include "gaussgap/io.hpp"
#include "gaussgap/report.hpp"
#include "gaussgap/sweep.hpp"
