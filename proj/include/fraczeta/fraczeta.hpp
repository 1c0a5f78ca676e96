#ifndef FRACZETA_FRACZETA_HPP
#define FRACZETA_FRACZETA_HPP

#include "fraczeta/decimation.hpp"
#include "fraczeta/error.hpp"
#include "fraczeta/functional.hpp"
#include "fraczeta/graph.hpp"
#include "fraczeta/io.hpp"
#include "fraczeta/model.hpp"
#include "fraczeta/oscillation.hpp"
#include "fraczeta/partition.hpp"
#include "fraczeta/poles.hpp"
#include "fraczeta/special.hpp"
#include "fraczeta/spectrum.hpp"
#include "fraczeta/zeta.hpp"

#endif  // FRACZETA_FRACZETA_HPP
