#pragma once

#include "hhp/error.hpp"
#include "hhp/fourier.hpp"
#include "hhp/symplectic.hpp"
#include "hhp/circle_map.hpp"
#include "hhp/pullback.hpp"
#include "hhp/period.hpp"
#include "hhp/quantum.hpp"
#include "hhp/io.hpp"
