#include "airship/log_io.hpp"

#include "airship/config.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace airship {

namespace {

void add_indexed(std::vector<std::string>& cols, const std::string& stem, int n) {
    for (int i = 0; i < n; ++i) cols.push_back(stem + "_" + std::to_string(i));
}

template <typename Vec>
void put(std::ostream& out, const Vec& v) {
    for (int i = 0; i < v.size(); ++i) out << ',' << format_number(v[i]);
}

}  // namespace

std::string format_number(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::vector<std::string> log_columns() {
    std::vector<std::string> cols = {"t", "pN", "pE", "pD", "q0", "q1", "q2", "q3", "u", "v", "w", "p", "q", "r"};
    add_indexed(cols, "z1", 7);
    add_indexed(cols, "z1dot", 7);
    add_indexed(cols, "z2", 7);
    add_indexed(cols, "fcmd", 6);
    add_indexed(cols, "fapp", 6);
    cols.insert(cols.end(), {"v2", "v2dot", "sds"});
    add_indexed(cols, "acc_cmd", 7);
    add_indexed(cols, "acc_real", 7);
    cols.insert(cols.end(), {"vw_N", "vw_E", "vw_D"});
    return cols;
}

void write_log_csv(const TimeSeriesLog& log, std::ostream& out) {
    const auto cols = log_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : log.records) {
        out << format_number(r.t);
        put(out, r.pose.p);
        put(out, r.pose.q);
        put(out, r.x.v_a);
        put(out, r.x.omega);
        put(out, r.err.z1);
        put(out, r.err.z1_dot);
        put(out, r.err.z2);
        put(out, r.f_cmd.vector());
        put(out, r.f_applied.vector());
        out << ',' << format_number(r.v2) << ',' << format_number(r.v2_dot) << ',' << format_number(r.sigma_sigmadot);
        put(out, r.accel_cmd);
        put(out, r.accel_real);
        put(out, r.v_w);
        out << '\n';
    }
}

std::vector<std::string> siso_log_columns(int order) {
    std::vector<std::string> cols = {"t"};
    add_indexed(cols, "x", order);
    add_indexed(cols, "z", order);
    cols.insert(cols.end(), {"sigma", "u", "sds", "V", "Vdot"});
    return cols;
}

void write_siso_csv(const std::vector<siso::SisoSample>& samples, std::ostream& out) {
    const int n = samples.empty() ? 2 : static_cast<int>(samples.front().x.size());
    const auto cols = siso_log_columns(n);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& s : samples) {
        out << format_number(s.t);
        put(out, s.x);
        put(out, s.z);
        out << ',' << format_number(s.sigma) << ',' << format_number(s.u) << ',' << format_number(s.sigma_sigmadot)
            << ',' << format_number(s.v) << ',' << format_number(s.v_dot) << '\n';
    }
}

std::string git_blob_sha1(const std::string& content) {
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                    EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, md.data(), &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw std::runtime_error("SHA-1 digest failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(kHex[md[i] >> 4]);
        hex.push_back(kHex[md[i] & 0xF]);
    }
    return hex;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

void write_with_sidecar(const std::filesystem::path& path, const std::string& text, nlohmann::json metadata) {
    write_text_file(path, text);
    metadata["file"] = path.filename().string();
    metadata["bytes"] = text.size();
    metadata["git_blob_sha1"] = git_blob_sha1(text);
    write_text_file(std::filesystem::path(path.string() + ".json"), metadata.dump(2) + "\n");
}

}  // namespace airship
