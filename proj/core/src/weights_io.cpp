#include "grasp/weights_io.hpp"

#include "grasp/errors.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <set>

namespace grasp {

namespace {

constexpr char kMagic[8] = {'G', 'R', 'A', 'S', 'P', 'W', 'T', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void put_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw FormatError(path + ": truncated weight file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8))
        throw FormatError(path + ": truncated weight file");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

float get_f32(std::istream& in, const std::string& path) {
    const std::uint32_t bits = get_u32(in, path);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

} // namespace

void save_weights(const std::vector<const Param*>& params, const std::string& path) {
    std::set<std::string> names;
    for (const Param* p : params)
        if (!names.insert(p->name).second)
            throw Error("save_weights: duplicate parameter name '" + p->name + "'");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out.write(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    for (const Param* p : params) {
        put_u64(out, p->name.size());
        out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        put_u64(out, p->value.rank());
        for (std::size_t d : p->value.shape) put_u64(out, d);
        for (Scalar v : p->value.data) put_f32(out, static_cast<float>(v));
    }
    if (!out) throw DataError("write failed: " + path);
}

void load_weights(const std::vector<Param*>& params, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open weight file: " + path);
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw FormatError(path + ": not a graspkit weight file (bad magic)");
    const std::uint32_t version = get_u32(in, path);
    if (version != kVersion)
        throw FormatError(path + ": unsupported weight file version " +
                          std::to_string(version));

    std::map<std::string, Tensor> stored;
    while (true) {
        unsigned char probe;
        if (!in.read(reinterpret_cast<char*>(&probe), 1)) break; // clean EOF
        in.putback(static_cast<char>(probe));
        const std::uint64_t name_len = get_u64(in, path);
        std::string name(name_len, '\0');
        if (!in.read(name.data(), static_cast<std::streamsize>(name_len)))
            throw FormatError(path + ": truncated tensor name");
        const std::uint64_t rank = get_u64(in, path);
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) d = static_cast<std::size_t>(get_u64(in, path));
        Tensor t(shape);
        for (Scalar& v : t.data) v = static_cast<Scalar>(get_f32(in, path));
        if (!stored.emplace(name, std::move(t)).second)
            throw FormatError(path + ": duplicate tensor '" + name + "'");
    }

    std::string problems;
    std::set<std::string> consumed;
    for (Param* p : params) {
        const auto it = stored.find(p->name);
        if (it == stored.end()) {
            problems += "\n  missing tensor '" + p->name + "'";
            continue;
        }
        consumed.insert(p->name);
        if (it->second.shape != p->value.shape) {
            problems += "\n  shape mismatch for '" + p->name + "': file " +
                        it->second.shape_str() + " vs model " + p->value.shape_str();
        }
    }
    for (const auto& [name, _] : stored)
        if (!consumed.count(name)) problems += "\n  unexpected tensor '" + name + "'";
    if (!problems.empty())
        throw DataError("load_weights(" + path + "):" + problems);

    for (Param* p : params) p->value = std::move(stored.at(p->name));
}

} // namespace grasp
