#include <pybind11/pybind11.h>

PYBIND11_MODULE(fbselect, m) {
    m.doc() = "placeholder";
}
