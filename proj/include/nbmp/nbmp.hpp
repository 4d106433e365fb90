#pragma once

// Everything except the command-line front end.
#include "nbmp/errors.hpp"
#include "nbmp/lattice.hpp"
#include "nbmp/grid.hpp"
#include "nbmp/model.hpp"
#include "nbmp/barrier.hpp"
#include "nbmp/bounds.hpp"
#include "nbmp/exact.hpp"
#include "nbmp/waves.hpp"
#include "nbmp/nonexistence.hpp"
#include "nbmp/io.hpp"
