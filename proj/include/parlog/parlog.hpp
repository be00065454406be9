// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "parlog/error.hpp"
#include "parlog/rational.hpp"
#include "parlog/series.hpp"
#include "parlog/laurent_matrix.hpp"
#include "parlog/rootsys.hpp"
#include "parlog/parahoric.hpp"
#include "parlog/equivariant.hpp"
#include "parlog/parabolic.hpp"
#include "parlog/degree.hpp"
#include "parlog/problem.hpp"
