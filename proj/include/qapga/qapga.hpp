#pragma once

#include "qapga/bench.hpp"
#include "qapga/config.hpp"
#include "qapga/error.hpp"
#include "qapga/ga.hpp"
#include "qapga/instance.hpp"
#include "qapga/oracle.hpp"
#include "qapga/random.hpp"
