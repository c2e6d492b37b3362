#pragma once

#include "minpart/errors.hpp"
#include "minpart/geometry.hpp"
#include "minpart/magnetic_operator.hpp"
#include "minpart/eigensolver.hpp"
#include "minpart/weyl_counting.hpp"
#include "minpart/constants_ledger.hpp"
#include "minpart/partition_analysis.hpp"
#include "minpart/pole_search.hpp"
#include "minpart/certificate.hpp"
#include "minpart/io.hpp"
