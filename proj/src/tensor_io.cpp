#include "ste/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace ste {

namespace {

void put_f32_le(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) {
        bits = ((bits & 0x000000ffu) << 24) | ((bits & 0x0000ff00u) << 8) |
               ((bits & 0x00ff0000u) >> 8) | ((bits & 0xff000000u) >> 24);
    }
    char buf[4];
    std::memcpy(buf, &bits, 4);
    out.write(buf, 4);
}

float get_f32_le(std::istream& in) {
    char buf[4];
    in.read(buf, 4);
    std::uint32_t bits;
    std::memcpy(&bits, buf, 4);
    if constexpr (std::endian::native == std::endian::big) {
        bits = ((bits & 0x000000ffu) << 24) | ((bits & 0x0000ff00u) << 8) |
               ((bits & 0x00ff0000u) >> 8) | ((bits & 0xff000000u) >> 24);
    }
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

} // namespace

void save_tensor(const Tensor& t, std::ostream& out) {
    out << "STE " << t.ndim();
    for (std::size_t d : t.shape()) {
        out << ' ' << d;
    }
    out << '\n';
    for (std::size_t i = 0; i < t.numel(); ++i) {
        put_f32_le(out, static_cast<float>(t[i]));
    }
    if (!out) {
        throw std::runtime_error("save_tensor: write failed");
    }
}

void save_tensor(const Tensor& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("save_tensor: cannot open " + path.string());
    }
    save_tensor(t, out);
}

Tensor load_tensor(std::istream& in) {
    std::string magic;
    in >> magic;
    if (magic != "STE") {
        throw std::runtime_error("load_tensor: bad magic '" + magic + "'");
    }
    std::size_t ndim = 0;
    in >> ndim;
    if (!in || ndim == 0 || ndim > 8) {
        throw std::runtime_error("load_tensor: bad rank");
    }
    std::vector<std::size_t> shape(ndim);
    for (auto& d : shape) {
        in >> d;
        if (!in || d == 0) {
            throw std::runtime_error("load_tensor: bad extent");
        }
    }
    in.ignore(1); // the newline terminating the header
    Tensor t(shape);
    for (std::size_t i = 0; i < t.numel(); ++i) {
        t[i] = static_cast<double>(get_f32_le(in));
    }
    if (!in) {
        throw std::runtime_error("load_tensor: truncated payload");
    }
    return t;
}

Tensor load_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("load_tensor: cannot open " + path.string());
    }
    return load_tensor(in);
}

} // namespace ste
