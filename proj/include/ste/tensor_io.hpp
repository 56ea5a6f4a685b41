#pragma once

#include <filesystem>
#include <iosfwd>

#include "ste/tensor.hpp"

namespace ste {

// Raw tensor dump: ASCII header "STE <ndim> <d0> <d1> ...\n" followed by
// row-major little-endian float32 payload. The CLI exchanges embedding and
// weight tensors in this format.
void save_tensor(const Tensor& t, std::ostream& out);
void save_tensor(const Tensor& t, const std::filesystem::path& path);

Tensor load_tensor(std::istream& in);
Tensor load_tensor(const std::filesystem::path& path);

} // namespace ste
