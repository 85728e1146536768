#pragma once

#include "coagfrag/grid.hpp"
#include "coagfrag/kernels.hpp"
#include "coagfrag/operators.hpp"

namespace coagfrag {

using Vector = Vec<double>;
using Matrix = Mat<double>;
using Grid = SizeGrid<double>;
using Function = GridFunction<double>;
using Kernel = KernelSpec<double>;
using Assembly = OperatorAssembly<double>;

} // namespace coagfrag
