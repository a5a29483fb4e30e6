#pragma once

#include "rfpca/compositional.hpp"
#include "rfpca/csv.hpp"
#include "rfpca/errors.hpp"
#include "rfpca/fpca.hpp"
#include "rfpca/frechet.hpp"
#include "rfpca/geo.hpp"
#include "rfpca/jacobi.hpp"
#include "rfpca/l2.hpp"
#include "rfpca/legendre.hpp"
#include "rfpca/manifold.hpp"
#include "rfpca/model_io.hpp"
#include "rfpca/rng.hpp"
#include "rfpca/simulate.hpp"
#include "rfpca/types.hpp"
#include "rfpca/vecmath.hpp"
