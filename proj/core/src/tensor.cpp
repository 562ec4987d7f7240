#include "grasp/tensor.hpp"

#include "grasp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace grasp {

std::size_t Tensor::numel_of(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) {
        if (d == 0) throw Error("Tensor: zero extent in shape");
        n *= d;
    }
    return n;
}

Tensor::Tensor(std::vector<std::size_t> s)
    : shape(std::move(s)), data(numel_of(shape), Scalar(0)) {}

Tensor::Tensor(std::vector<std::size_t> s, Scalar fill)
    : shape(std::move(s)), data(numel_of(shape), fill) {}

void Tensor::fill(Scalar v) { std::fill(data.begin(), data.end(), v); }

bool Tensor::all_finite() const {
    for (Scalar v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

std::string Tensor::shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i)
        s += (i ? ", " : "") + std::to_string(shape[i]);
    return s + "]";
}

} // namespace grasp
