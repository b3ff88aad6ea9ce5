#pragma once

#include "vec3.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "curve.hpp"
#include "writhe.hpp"
#include "indicatrix.hpp"
#include "deform.hpp"
#include "family.hpp"
#include "io.hpp"
#include "corpus.hpp"
