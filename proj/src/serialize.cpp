#include <cstdint>
#include <cstring>
#include <fstream>

#include "kjl/baselines.hpp"
#include "kjl/sketch.hpp"

// Flat binary container shared by all projector types:
//   magic "KJLP", u32 version, u32 method tag, then a method payload of
//   sizes, flags, and raw little-endian doubles. Matrices round-trip
//   bit-exactly because values are copied, never formatted.

namespace kjl {

namespace {

constexpr char kMagic[4] = {'K', 'J', 'L', 'P'};
constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw IoError("save_projector: cannot open " + path + " for writing");
    }

    void u8(std::uint8_t v) { raw(&v, 1); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void matrix(const Matrix& m) {
        u64(m.rows());
        u64(m.cols());
        raw(m.data().data(), m.data().size() * sizeof(double));
    }
    void vec(const std::vector<double>& v) {
        u64(v.size());
        raw(v.data(), v.size() * sizeof(double));
    }

private:
    void raw(const void* p, std::size_t bytes) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(bytes));
        if (!out_) throw IoError("save_projector: write failed");
    }
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
        if (!in_) throw IoError("load_projector: cannot open " + path);
    }

    std::uint8_t u8() {
        std::uint8_t v;
        raw(&v, 1);
        return v;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        raw(&v, sizeof v);
        return v;
    }
    Matrix matrix() {
        const std::uint64_t rows = u64();
        const std::uint64_t cols = u64();
        Matrix m(rows, cols);
        raw(m.data().data(), m.data().size() * sizeof(double));
        return m;
    }
    std::vector<double> vec() {
        std::vector<double> v(u64());
        raw(v.data(), v.size() * sizeof(double));
        return v;
    }

private:
    void raw(void* p, std::size_t bytes) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(bytes));
        if (in_.gcount() != static_cast<std::streamsize>(bytes))
            throw ParseError("load_projector: truncated file", -1);
    }
    std::ifstream in_;
};

void write_header(Writer& w, Method method) {
    w.u8(static_cast<std::uint8_t>(kMagic[0]));
    w.u8(static_cast<std::uint8_t>(kMagic[1]));
    w.u8(static_cast<std::uint8_t>(kMagic[2]));
    w.u8(static_cast<std::uint8_t>(kMagic[3]));
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(method));
}

Method read_header(Reader& r) {
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.u8());
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw ParseError("load_projector: not a projector file", -1);
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw ParseError("load_projector: unsupported container version", -1);
    return static_cast<Method>(r.u32());
}

void write_gram(Writer& w, const GramMatrix& g) {
    w.matrix(g.base.full());
    w.u8(g.centered ? 1 : 0);
    if (g.centered) {
        w.vec(g.row_means);
        w.f64(g.grand_mean);
    }
}

GramMatrix read_gram(Reader& r) {
    GramMatrix g;
    g.base = SymMatrix(r.matrix());
    g.centered = r.u8() != 0;
    if (g.centered) {
        g.row_means = r.vec();
        g.grand_mean = r.f64();
    }
    return g;
}

}  // namespace

void save_projector(const SketchProjector& p, const std::string& path) {
    Writer w(path);
    write_header(w, Method::kjl);
    w.u64(p.seed);
    w.u32(static_cast<std::uint32_t>(p.n));
    w.u32(static_cast<std::uint32_t>(p.d));
    w.f64(p.spec.bandwidth_sq);
    w.u8(p.centered ? 1 : 0);
    w.u8(p.center_oos ? 1 : 0);
    w.matrix(p.subsample);
    w.matrix(p.sketch);
    write_gram(w, p.gram);
}

SketchProjector load_sketch_projector(const std::string& path) {
    Reader r(path);
    if (read_header(r) != Method::kjl)
        throw ParseError("load_sketch_projector: file holds a different method", -1);
    SketchProjector p;
    p.seed = r.u64();
    p.n = static_cast<int>(r.u32());
    p.d = static_cast<int>(r.u32());
    p.spec = KernelSpec::gaussian(r.f64());
    p.centered = r.u8() != 0;
    p.center_oos = r.u8() != 0;
    p.subsample = r.matrix();
    p.sketch = r.matrix();
    p.gram = read_gram(r);
    return p;
}

void save_projector(const KpcaProjector& p, const std::string& path) {
    Writer w(path);
    write_header(w, Method::kpca);
    w.u32(static_cast<std::uint32_t>(p.d));
    w.f64(p.spec.bandwidth_sq);
    w.u8(p.mode == KpcaMode::unit_norm ? 1 : 0);
    w.matrix(p.subsample);
    w.matrix(p.alphas);
    w.vec(p.eigenvalues);
    write_gram(w, p.centered_gram);
}

KpcaProjector load_kpca_projector(const std::string& path) {
    Reader r(path);
    if (read_header(r) != Method::kpca)
        throw ParseError("load_kpca_projector: file holds a different method", -1);
    KpcaProjector p;
    p.d = static_cast<int>(r.u32());
    p.spec = KernelSpec::gaussian(r.f64());
    p.mode = r.u8() != 0 ? KpcaMode::unit_norm : KpcaMode::unnormalized;
    p.subsample = r.matrix();
    p.alphas = r.matrix();
    p.eigenvalues = r.vec();
    p.centered_gram = read_gram(r);
    return p;
}

void save_projector(const NystromProjector& p, const std::string& path) {
    Writer w(path);
    write_header(w, Method::nystrom);
    w.u32(static_cast<std::uint32_t>(p.d));
    w.f64(p.spec.bandwidth_sq);
    w.matrix(p.subsample);
    w.matrix(p.map);
    w.vec(p.eigenvalues);
}

NystromProjector load_nystrom_projector(const std::string& path) {
    Reader r(path);
    if (read_header(r) != Method::nystrom)
        throw ParseError("load_nystrom_projector: file holds a different method", -1);
    NystromProjector p;
    p.d = static_cast<int>(r.u32());
    p.spec = KernelSpec::gaussian(r.f64());
    p.subsample = r.matrix();
    p.map = r.matrix();
    p.eigenvalues = r.vec();
    return p;
}

Method peek_projector_method(const std::string& path) {
    Reader r(path);
    return read_header(r);
}

}  // namespace kjl
