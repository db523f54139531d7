#ifndef QSD_QSD_HPP
#define QSD_QSD_HPP

#include "qsd/families.hpp"
#include "qsd/geometry.hpp"
#include "qsd/graph.hpp"
#include "qsd/inequalities.hpp"
#include "qsd/io.hpp"
#include "qsd/kernels.hpp"
#include "qsd/linalg.hpp"
#include "qsd/quasistationary.hpp"
#include "qsd/rng.hpp"

#endif
