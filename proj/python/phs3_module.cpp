// placeholder binding module, replaced by the real implementation
#include <pybind11/pybind11.h>
PYBIND11_MODULE(_phs3, m) { m.doc() = "placeholder"; }
