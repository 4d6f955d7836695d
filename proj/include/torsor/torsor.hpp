#pragma once

#include "torsor/core.hpp"
#include "torsor/abelian.hpp"
#include "torsor/complex.hpp"
#include "torsor/cochain.hpp"
#include "torsor/tower.hpp"
#include "torsor/deligne.hpp"
#include "torsor/fixtures.hpp"
#include "torsor/io.hpp"
