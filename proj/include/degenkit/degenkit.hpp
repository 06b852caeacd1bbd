#pragma once

#include "degenkit/exact.hpp"
#include "degenkit/poly.hpp"
#include "degenkit/cone.hpp"
#include "degenkit/decomp.hpp"
#include "degenkit/atlas.hpp"
#include "degenkit/functor.hpp"
#include "degenkit/io.hpp"
#include "degenkit/svg.hpp"
