#pragma once

#include "htensor/errors.hpp"
#include "htensor/inversion.hpp"
#include "htensor/io.hpp"
#include "htensor/matrix.hpp"
#include "htensor/parallel.hpp"
#include "htensor/permutation.hpp"
#include "htensor/products.hpp"
#include "htensor/random.hpp"
#include "htensor/report.hpp"
#include "htensor/spectra.hpp"
#include "htensor/symmetry.hpp"
#include "htensor/tensor.hpp"
