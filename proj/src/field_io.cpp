#include "kato/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace kato {

FormatError::FormatError(const std::string& what, std::uint64_t offset)
    : std::runtime_error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::string& out, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

class Reader {
public:
    explicit Reader(const std::string& s) : s_(s) {}

    template <typename T>
    T get(const char* what) {
        if (pos_ + sizeof(T) > s_.size()) throw FormatError(std::string("truncated payload reading ") + what, pos_);
        unsigned char b[sizeof(T)];
        std::memcpy(b, s_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big)
            for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        T v;
        std::memcpy(&v, b, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::uint64_t pos() const { return pos_; }
    std::uint64_t remaining() const { return s_.size() - pos_; }

private:
    const std::string& s_;
    std::uint64_t pos_ = 0;
};

void put_header(std::string& out, std::uint32_t version, const Grid& g) {
    out.append("KSLF", 4);
    put<std::uint32_t>(out, version);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.N));
    put<double>(out, g.L);
}

void put_samples(std::string& out, const cvec& v) {
    out.reserve(out.size() + v.size() * 16);
    for (const auto& z : v) {
        put<double>(out, z.real());
        put<double>(out, z.imag());
    }
}

struct Header {
    std::uint32_t version;
    Grid grid;
};

Header get_header(Reader& r, const std::string& bytes) {
    if (bytes.size() < 4 || bytes.compare(0, 4, "KSLF") != 0) throw FormatError("bad magic, expected KSLF", 0);
    r.get<std::uint32_t>("magic");
    const std::uint64_t vpos = r.pos();
    const auto version = r.get<std::uint32_t>("version");
    if (version != kslf_field_version && version != kslf_spacetime_version)
        throw FormatError("unsupported version " + std::to_string(version), vpos);
    const std::uint64_t npos = r.pos();
    const auto n = r.get<std::uint32_t>("n");
    const std::uint64_t Npos = r.pos();
    const auto N = r.get<std::uint32_t>("N");
    const std::uint64_t Lpos = r.pos();
    const auto L = r.get<double>("L");
    Header h{version, {}};
    try {
        h.grid = Grid::make(static_cast<int>(n), N, L);
    } catch (const std::invalid_argument& e) {
        const std::uint64_t at = (n < 1 || n > 3) ? npos : (!(L > 0.0) ? Lpos : Npos);
        throw FormatError(std::string("invalid grid header: ") + e.what(), at);
    }
    return h;
}

cvec get_samples(Reader& r, std::size_t count) {
    if (r.remaining() < count * 16)
        throw FormatError("payload holds " + std::to_string(r.remaining()) + " bytes, need " + std::to_string(count * 16),
                          r.pos());
    cvec v(count);
    for (auto& z : v) {
        const double re = r.get<double>("sample");
        const double im = r.get<double>("sample");
        z = {re, im};
    }
    if (r.remaining() != 0) throw FormatError("trailing bytes after samples", r.pos());
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

std::string encode_field(const Field& f) {
    if (f.domain != Domain::space) throw std::invalid_argument("only space-side fields are persisted");
    std::string out;
    put_header(out, kslf_field_version, f.grid);
    put_samples(out, f.data);
    return out;
}

std::string encode_spacetime(const SpacetimeField& u) {
    std::string out;
    put_header(out, kslf_spacetime_version, u.grid);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(u.times.size()));
    for (double t : u.times) put<double>(out, t);
    put_samples(out, u.data);
    return out;
}

Field decode_field(const std::string& bytes) {
    Reader r(bytes);
    Header h = get_header(r, bytes);
    if (h.version != kslf_field_version) throw FormatError("expected a field record (version 1)", 4);
    return Field(h.grid, get_samples(r, h.grid.size()));
}

SpacetimeField decode_spacetime(const std::string& bytes) {
    Reader r(bytes);
    Header h = get_header(r, bytes);
    if (h.version != kslf_spacetime_version) throw FormatError("expected a spacetime record (version 2)", 4);
    const auto S = r.get<std::uint32_t>("slice count");
    rvec times(S);
    for (auto& t : times) t = r.get<double>("time");
    SpacetimeField u(h.grid, times);
    u.data = get_samples(r, h.grid.size() * S);
    return u;
}

void write_field(const std::string& path, const Field& f) { spill(path, encode_field(f)); }
void write_spacetime(const std::string& path, const SpacetimeField& u) { spill(path, encode_spacetime(u)); }
Field read_field(const std::string& path) { return decode_field(slurp(path)); }
SpacetimeField read_spacetime(const std::string& path) { return decode_spacetime(slurp(path)); }

SpacetimeField read_any(const std::string& path) {
    const std::string bytes = slurp(path);
    Reader r(bytes);
    Header h = get_header(r, bytes);
    if (h.version == kslf_spacetime_version) return decode_spacetime(bytes);
    Field f = decode_field(bytes);
    SpacetimeField u(f.grid, {0.0});
    u.data = f.data;
    return u;
}

}  // namespace kato
