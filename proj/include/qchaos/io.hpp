#pragma once

// File formats and run manifests.
//
// Binary files are little-endian. Every format carries a magic or a
// "format" tag and loaders reject anything else.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "qchaos/eigen_stats.hpp"
#include "qchaos/phase_space.hpp"
#include "qchaos/quantum_maps.hpp"
#include "qchaos/random_waves.hpp"
#include "qchaos/scar_lab.hpp"

#ifndef QCHAOS_GIT_REV
#define QCHAOS_GIT_REV "unknown"
#endif
#ifndef QCHAOS_VERSION
#define QCHAOS_VERSION "0.0.0"
#endif

namespace qchaos {

using json = nlohmann::ordered_json;

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

inline const char* git_rev() { return QCHAOS_GIT_REV; }
inline const char* tool_version() { return QCHAOS_VERSION; }

inline constexpr char kStateMagic[4] = {'T', 'Q', 'S', '1'};

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p, bool binary = false) {
    std::ofstream f(p, binary ? std::ios::binary | std::ios::out | std::ios::trunc : std::ios::out | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + p.string());
    return f;
}

inline std::ifstream open_in(const std::filesystem::path& p, bool binary = false) {
    std::ifstream f(p, binary ? std::ios::binary | std::ios::in : std::ios::in);
    if (!f) throw IoError("cannot open for reading: " + p.string());
    return f;
}

inline void finish(std::ostream& f, const std::filesystem::path& p) {
    f.flush();
    if (!f) throw IoError("write failed: " + p.string());
}

template <class T>
void put(std::ostream& o, T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    o.write(b, sizeof(T));
}

template <class T>
T take(std::istream& i, const std::filesystem::path& p) {
    char b[sizeof(T)];
    if (!i.read(b, sizeof(T))) throw IoError("truncated file: " + p.string());
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

inline std::string fmt(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

}  // namespace detail

inline void write_json(const std::filesystem::path& p, const json& j) {
    auto f = detail::open_out(p);
    f << j.dump(2) << '\n';
    detail::finish(f, p);
}

inline json read_json(const std::filesystem::path& p) {
    auto f = detail::open_in(p);
    try {
        return json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed JSON in " + p.string() + ": " + e.what());
    }
}

inline void require_format(const json& j, const std::string& expected, const std::filesystem::path& p) {
    if (!j.contains("format") || j["format"] != expected)
        throw IoError("unsupported format in " + p.string() + " (expected " + expected + ")");
}

// ---------------------------------------------------------------------------
// TorusState: "TQS1", u64 N, N x (f64 re, f64 im)

inline void write_state_record(std::ostream& o, const TorusState& s) {
    o.write(kStateMagic, 4);
    detail::put<std::uint64_t>(o, static_cast<std::uint64_t>(s.dim()));
    for (int l = 0; l < s.dim(); ++l) {
        detail::put<double>(o, s[l].real());
        detail::put<double>(o, s[l].imag());
    }
}

inline TorusState read_state_record(std::istream& i, const std::filesystem::path& p) {
    char magic[4];
    if (!i.read(magic, 4)) throw IoError("truncated state file: " + p.string());
    if (std::memcmp(magic, kStateMagic, 4) != 0) throw IoError("unsupported state format in " + p.string());
    const auto N = detail::take<std::uint64_t>(i, p);
    if (N == 0 || N > (1ULL << 24)) throw IoError("implausible dimension in " + p.string());
    CVector v(static_cast<Eigen::Index>(N));
    for (std::uint64_t l = 0; l < N; ++l) {
        const double re = detail::take<double>(i, p);
        const double im = detail::take<double>(i, p);
        v[static_cast<Eigen::Index>(l)] = cplx(re, im);
    }
    return TorusState(std::move(v));
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& p) {
    std::filesystem::path s = p;
    s += ".json";
    return s;
}

/// Writes the binary state and its JSON sidecar; returns the sidecar path.
inline std::filesystem::path write_state(const std::filesystem::path& p, const TorusState& s,
                                         std::optional<std::uint64_t> seed = std::nullopt) {
    {
        auto f = detail::open_out(p, true);
        write_state_record(f, s);
        detail::finish(f, p);
    }
    json j;
    j["format"] = "TQS1";
    j["N"] = s.dim();
    j["norm"] = s.norm();
    j["description"] = s.description();
    if (seed) j["seed"] = *seed;
    const auto side = sidecar_path(p);
    write_json(side, j);
    return side;
}

inline TorusState read_state(const std::filesystem::path& p) {
    auto f = detail::open_in(p, true);
    TorusState s = read_state_record(f, p);
    if (f.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in state file: " + p.string());
    const auto side = sidecar_path(p);
    std::string desc;
    if (std::filesystem::exists(side)) {
        const json j = read_json(side);
        require_format(j, "TQS1", side);
        if (j.value("N", -1) != s.dim()) throw IoError("sidecar dimension mismatch: " + side.string());
        desc = j.value("description", "");
    }
    return TorusState(s.amps(), desc);
}

// ---------------------------------------------------------------------------
// CSV with a format line

struct CsvTable {
    std::string format;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(const std::filesystem::path& p, const std::string& format, const std::vector<std::string>& cols,
                      const std::vector<std::vector<double>>& rows) {
    auto f = detail::open_out(p);
    f << "# format: " << format << '\n';
    for (std::size_t c = 0; c < cols.size(); ++c) f << (c ? "," : "") << cols[c];
    f << '\n';
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) f << (c ? "," : "") << detail::fmt(r[c]);
        f << '\n';
    }
    detail::finish(f, p);
}

inline CsvTable read_csv(const std::filesystem::path& p, const std::string& expected_format) {
    auto f = detail::open_in(p);
    CsvTable t;
    std::string line;
    if (!std::getline(f, line) || line.rfind("# format: ", 0) != 0) throw IoError("missing format line in " + p.string());
    t.format = line.substr(10);
    if (t.format != expected_format) throw IoError("unsupported format '" + t.format + "' in " + p.string());
    if (!std::getline(f, line)) throw IoError("missing header in " + p.string());
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) t.columns.push_back(c);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> r;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) {
            try {
                r.push_back(std::stod(c));
            } catch (const std::exception&) {
                throw IoError("bad number '" + c + "' in " + p.string());
            }
        }
        if (r.size() != t.columns.size()) throw IoError("ragged row in " + p.string());
        t.rows.push_back(std::move(r));
    }
    return t;
}

inline void write_spectrum_csv(const std::filesystem::path& p, const SpectralData& s) {
    std::vector<std::vector<double>> rows;
    for (int j = 0; j < s.N; ++j) rows.push_back({static_cast<double>(j), s.phases[j], s.residuals[j]});
    write_csv(p, "qchaos-spectrum/1", {"j", "theta_j", "residual"}, rows);
}

/// Eigenvectors as concatenated TQS1 records plus an index JSON.
inline void write_eigenvector_bundle(const std::filesystem::path& p, const SpectralData& s) {
    {
        auto f = detail::open_out(p, true);
        for (int j = 0; j < s.N; ++j) write_state_record(f, s.state(j));
        detail::finish(f, p);
    }
    json idx;
    idx["format"] = "qchaos-eigenbundle/1";
    idx["record_format"] = "TQS1";
    idx["N"] = s.N;
    idx["count"] = s.N;
    idx["record_bytes"] = 12 + 16 * s.N;
    json entries = json::array();
    for (int j = 0; j < s.N; ++j)
        entries.push_back({{"j", j}, {"theta", s.phases[j]}, {"offset", static_cast<long long>(j) * (12 + 16 * s.N)}});
    idx["entries"] = entries;
    write_json(sidecar_path(p), idx);
}

inline std::vector<TorusState> read_eigenvector_bundle(const std::filesystem::path& p) {
    const auto side = sidecar_path(p);
    const json idx = read_json(side);
    require_format(idx, "qchaos-eigenbundle/1", side);
    auto f = detail::open_in(p, true);
    std::vector<TorusState> out;
    const int count = idx.at("count").get<int>();
    for (int j = 0; j < count; ++j) out.push_back(read_state_record(f, p));
    return out;
}

// ---------------------------------------------------------------------------
// Husimi PGM: P5, maxval 65535, big-endian samples scaled by the grid max.
// Column = x index, top row = largest p.

inline void write_husimi_pgm(const std::filesystem::path& p, const HusimiGrid& h) {
    const double mx = h.values.maxCoeff();
    if (!(mx > 0.0)) throw NumericalError("write_husimi_pgm: empty density");
    {
        auto f = detail::open_out(p, true);
        f << "P5\n" << h.M << ' ' << h.M << "\n65535\n";
        for (int row = 0; row < h.M; ++row) {
            const int j = h.M - 1 - row;
            for (int i = 0; i < h.M; ++i) {
                const auto v = static_cast<std::uint16_t>(std::lround(std::clamp(h.values(i, j) / mx, 0.0, 1.0) * 65535.0));
                const char b[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
                f.write(b, 2);
            }
        }
        detail::finish(f, p);
    }
    json j;
    j["format"] = "qchaos-husimi/1";
    j["N"] = h.N;
    j["M"] = h.M;
    j["max_density"] = mx;
    write_json(sidecar_path(p), j);
}

struct PgmImage {
    int width = 0, height = 0, maxval = 0;
    std::vector<std::uint16_t> pixels;  ///< row-major from the top row
};

inline PgmImage read_pgm16(const std::filesystem::path& p) {
    auto f = detail::open_in(p, true);
    std::string magic;
    PgmImage img;
    f >> magic >> img.width >> img.height >> img.maxval;
    if (magic != "P5" || img.maxval != 65535) throw IoError("unsupported PGM variant in " + p.string());
    f.get();
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    for (auto& px : img.pixels) {
        unsigned char b[2];
        if (!f.read(reinterpret_cast<char*>(b), 2)) throw IoError("truncated PGM: " + p.string());
        px = static_cast<std::uint16_t>((b[0] << 8) | b[1]);
    }
    return img;
}

// ---------------------------------------------------------------------------
// Small CSV artifacts

inline void write_zeros_csv(const std::filesystem::path& p, const StellarSet& z) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : z.zeros) rows.push_back({s.x, s.p, static_cast<double>(s.multiplicity)});
    write_csv(p, "qchaos-zeros/1", {"x", "p", "multiplicity"}, rows);
}

inline void write_ldos_csv(const std::filesystem::path& p, const LdosCurve& c) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < c.theta.size(); ++i) rows.push_back({c.theta[i], c.weight[i]});
    write_csv(p, "qchaos-ldos/1", {"theta", "weight"}, rows);
}

inline void write_orbit_csv(const std::filesystem::path& p, const std::vector<PhasePoint>& orbit) {
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < orbit.size(); ++t) rows.push_back({static_cast<double>(t), orbit[t].x, orbit[t].p});
    write_csv(p, "qchaos-orbit/1", {"t", "x", "p"}, rows);
}

inline void write_correlation_csv(const std::filesystem::path& p, const std::vector<CorrelationEstimate>& c) {
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < c.size(); ++t) rows.push_back({static_cast<double>(t), c[t].value, c[t].stderr_});
    write_csv(p, "qchaos-correlation/1", {"t", "C", "stderr"}, rows);
}

inline void write_field_correlation_csv(const std::filesystem::path& p, const CorrelationCurve& c, double k) {
    std::vector<std::vector<double>> rows;
    for (std::size_t q = 0; q < c.r.size(); ++q)
        rows.push_back({c.r[q], k * c.r[q], c.value[q], c.stderr_[q], bessel_j(0, k * c.r[q])});
    write_csv(p, "qchaos-field-correlation/1", {"r", "kr", "C", "stderr", "J0"}, rows);
}

// ---------------------------------------------------------------------------
// JSON reports

inline json to_json(const StatReport& r) {
    json j;
    j["format"] = "qchaos-stat/1";
    j["descriptor"] = r.descriptor;
    j["n_samples"] = r.n_samples;
    j["mean"] = r.mean;
    j["var"] = r.var;
    j["skew"] = r.skew;
    j["kurtosis"] = r.kurtosis;
    j["hist"] = {{"edges", r.hist.edges}, {"counts", r.hist.counts}};
    j["stderr"] = {{"mean", r.stderr_mean}, {"var", r.stderr_var}};
    j["seed"] = r.seed;
    j["git_rev"] = git_rev();
    json extra = json::object();
    for (const auto& [k, v] : r.extra) extra[k] = v;
    j["extra"] = extra;
    if (!r.samples.empty()) j["samples"] = r.samples;
    return j;
}

inline StatReport stat_report_from_json(const json& j) {
    if (!j.contains("format") || j["format"] != "qchaos-stat/1") throw IoError("unsupported stat report format");
    StatReport r;
    r.descriptor = j.at("descriptor").get<std::string>();
    r.n_samples = j.at("n_samples").get<long long>();
    r.mean = j.at("mean").get<double>();
    r.var = j.at("var").get<double>();
    r.skew = j.at("skew").get<double>();
    r.kurtosis = j.at("kurtosis").get<double>();
    r.hist.edges = j.at("hist").at("edges").get<std::vector<double>>();
    r.hist.counts = j.at("hist").at("counts").get<std::vector<long long>>();
    r.stderr_mean = j.at("stderr").at("mean").get<double>();
    r.stderr_var = j.at("stderr").at("var").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("extra").items()) r.extra[k] = v.get<double>();
    if (j.contains("samples")) r.samples = j["samples"].get<std::vector<double>>();
    return r;
}

inline json to_json(const ScarReport& r) {
    json j;
    j["format"] = "qchaos-scar/1";
    j["N"] = r.N;
    j["T_N"] = r.period;
    j["T_E"] = r.ehrenfest;
    j["theta_star"] = r.theta_star;
    j["disk_mass"] = r.disk_mass;
    j["baseline"] = r.baseline;
    j["disk_radius"] = r.disk_radius;
    j["residual"] = r.residual;
    j["projection_norm"] = r.projection_norm;
    return j;
}

// ---------------------------------------------------------------------------
// Random-field dump: raw f32 values(i, j) with i slowest, plus a sidecar

inline void write_field(const std::filesystem::path& p, const ScalarField2D& f) {
    {
        auto o = detail::open_out(p, true);
        for (int i = 0; i < f.M; ++i)
            for (int j = 0; j < f.M; ++j) detail::put<float>(o, static_cast<float>(f.values(i, j)));
        detail::finish(o, p);
    }
    json j;
    j["format"] = "qchaos-field-f32/1";
    j["M"] = f.M;
    j["k"] = f.k;
    j["descriptor"] = f.descriptor;
    j["seed"] = f.seed;
    j["layout"] = "row-major values(i,j), x = i/M slowest";
    write_json(sidecar_path(p), j);
}

inline ScalarField2D read_field(const std::filesystem::path& p) {
    const auto side = sidecar_path(p);
    const json j = read_json(side);
    require_format(j, "qchaos-field-f32/1", side);
    ScalarField2D f;
    f.M = j.at("M").get<int>();
    f.k = j.at("k").get<double>();
    f.descriptor = j.value("descriptor", "");
    f.seed = j.value("seed", std::uint64_t{0});
    f.values.resize(f.M, f.M);
    auto in = detail::open_in(p, true);
    for (int i = 0; i < f.M; ++i)
        for (int k = 0; k < f.M; ++k) f.values(i, k) = detail::take<float>(in, p);
    return f;
}

// ---------------------------------------------------------------------------
// Digests and manifests

inline std::string sha256_file(const std::filesystem::path& p) {
    auto f = detail::open_in(p, true);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw IoError("sha256: digest init failed");
    }
    std::vector<char> buf(1 << 16);
    while (f) {
        f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (f.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(f.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return hex.str();
}

struct FileDigest {
    std::string path;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

inline FileDigest digest(const std::filesystem::path& p) {
    return {p.string(), sha256_file(p), std::filesystem::file_size(p)};
}

struct RunManifest {
    std::vector<std::string> argv;
    std::string subcommand;
    std::uint64_t seed = 0;
    std::string version = tool_version();
    std::string revision = git_rev();
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;
    double wall_time_s = 0.0;

    json to_json() const {
        json j;
        j["format"] = "qchaos-manifest/1";
        j["command_line"] = argv;
        j["subcommand"] = subcommand;
        j["seed"] = seed;
        j["tool_version"] = version;
        j["git_rev"] = revision;
        const auto list = [](const std::vector<FileDigest>& v) {
            json a = json::array();
            for (const auto& d : v) a.push_back({{"path", d.path}, {"sha256", d.sha256}, {"bytes", d.bytes}});
            return a;
        };
        j["inputs"] = list(inputs);
        j["outputs"] = list(outputs);
        j["wall_time_s"] = wall_time_s;
        return j;
    }

    static RunManifest from_json(const json& j) {
        if (!j.contains("format") || j["format"] != "qchaos-manifest/1") throw IoError("unsupported manifest format");
        RunManifest m;
        m.argv = j.at("command_line").get<std::vector<std::string>>();
        m.subcommand = j.at("subcommand").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.version = j.at("tool_version").get<std::string>();
        m.revision = j.at("git_rev").get<std::string>();
        const auto list = [](const json& a) {
            std::vector<FileDigest> v;
            for (const auto& d : a) v.push_back({d.at("path"), d.at("sha256"), d.at("bytes").get<std::uintmax_t>()});
            return v;
        };
        m.inputs = list(j.at("inputs"));
        m.outputs = list(j.at("outputs"));
        m.wall_time_s = j.value("wall_time_s", 0.0);
        return m;
    }
};

}  // namespace qchaos
