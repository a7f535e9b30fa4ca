#pragma once

#include "qae/circuits.hpp"
#include "qae/classify.hpp"
#include "qae/data.hpp"
#include "qae/error.hpp"
#include "qae/expressibility.hpp"
#include "qae/optimize.hpp"
#include "qae/parallel.hpp"
#include "qae/serialize.hpp"
#include "qae/statevector.hpp"
