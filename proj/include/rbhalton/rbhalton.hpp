#pragma once

// Umbrella header.

#include "rbhalton/exact.hpp"
#include "rbhalton/numeration.hpp"
#include "rbhalton/inverse.hpp"
#include "rbhalton/sequence.hpp"
#include "rbhalton/congruence.hpp"
#include "rbhalton/discrepancy.hpp"
#include "rbhalton/witness.hpp"
#include "rbhalton/io.hpp"
