#pragma once

#include "sparsenet/bench.hpp"
#include "sparsenet/correlation.hpp"
#include "sparsenet/data_matrix.hpp"
#include "sparsenet/errors.hpp"
#include "sparsenet/filtration.hpp"
#include "sparsenet/glasso.hpp"
#include "sparsenet/glasso_filtration.hpp"
#include "sparsenet/io.hpp"
#include "sparsenet/parallel.hpp"
#include "sparsenet/partial_correlation.hpp"
#include "sparsenet/reference_lasso.hpp"
#include "sparsenet/soft_threshold.hpp"
#include "sparsenet/symmetric_matrix.hpp"
#include "sparsenet/synthetic.hpp"
#include "sparsenet/types.hpp"
#include "sparsenet/union_find.hpp"
