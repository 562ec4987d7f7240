#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace grasp {

// 64-bit floats by default so gradient checks are meaningful; fast builds
// may flip to 32-bit via GRASPKIT_FP32.
#ifdef GRASPKIT_FP32
using Scalar = float;
#else
using Scalar = double;
#endif

// Dense row-major N-dimensional array.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<Scalar> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s);
    Tensor(std::vector<std::size_t> s, Scalar fill);

    static std::size_t numel_of(const std::vector<std::size_t>& shape);

    std::size_t numel() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    std::size_t dim(std::size_t i) const { return shape.at(i); }

    Scalar* ptr() { return data.data(); }
    const Scalar* ptr() const { return data.data(); }

    void fill(Scalar v);
    void zero() { fill(Scalar(0)); }
    bool all_finite() const;
    bool same_shape(const Tensor& other) const { return shape == other.shape; }

    std::string shape_str() const; // "[2, 3, 4]" for error messages
};

} // namespace grasp
