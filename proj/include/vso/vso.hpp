#pragma once

#include "vso/convergence.hpp"
#include "vso/core.hpp"
#include "vso/discretization.hpp"
#include "vso/modal.hpp"
#include "vso/model.hpp"
#include "vso/observer.hpp"
#include "vso/resolvent.hpp"
#include "vso/scenario.hpp"
