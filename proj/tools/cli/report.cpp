#include "report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace msre::cli {

std::string sha256_hex(const std::string& bytes)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                &EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i)
    {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string format_double(double x)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

nlohmann::json to_json(const Assertion& a)
{
    return {{"name", a.name}, {"value", a.value}, {"threshold", a.threshold}, {"pass", a.pass}};
}

Csv::Csv(const std::vector<std::string>& header)
{
    for (const auto& h : header)
        *this << h;
    end_row();
}

void Csv::sep()
{
    if (!row_start_)
        text_ += ',';
    row_start_ = false;
}

Csv& Csv::operator<<(double x)
{
    sep();
    text_ += format_double(x);
    return *this;
}

Csv& Csv::operator<<(std::int64_t x)
{
    sep();
    text_ += std::to_string(x);
    return *this;
}

Csv& Csv::operator<<(std::uint64_t x)
{
    sep();
    text_ += std::to_string(x);
    return *this;
}

Csv& Csv::operator<<(const std::string& s)
{
    sep();
    text_ += s;
    return *this;
}

void Csv::end_row()
{
    text_ += '\n';
    row_start_ = true;
}

OutputDir::OutputDir(std::string dir) : dir_(std::move(dir))
{
    std::filesystem::create_directories(dir_);
}

void OutputDir::write(const std::string& name, const std::string& content)
{
    if (name.empty() || name.find('/') != std::string::npos
        || name.find('\\') != std::string::npos || name == "." || name == "..")
        throw std::invalid_argument("output name '" + name + "' is not a plain file name");
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    for (auto& e : entries_)
        if (e.name == name)
        {
            e = {name, sha256_hex(content), content.size()};
            return;
        }
    entries_.push_back({name, sha256_hex(content), content.size()});
}

nlohmann::json OutputDir::manifest() const
{
    auto m = nlohmann::json::array();
    for (const auto& e : entries_)
        m.push_back({{"file", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    return m;
}

std::string gnuplot_script(const std::string& csv, const std::string& title,
                           const std::vector<std::pair<int, int>>& columns,
                           const std::vector<std::string>& labels, bool loglog)
{
    std::string s;
    s += "set datafile separator ','\n";
    s += "set key autotitle columnhead\n";
    s += "set title '" + title + "'\n";
    if (loglog)
        s += "set logscale xy\n";
    s += "plot ";
    for (std::size_t k = 0; k < columns.size(); ++k)
    {
        if (k > 0)
            s += ", \\\n     ";
        s += "'" + csv + "' using " + std::to_string(columns[k].first) + ":"
             + std::to_string(columns[k].second) + " with linespoints";
        if (k < labels.size())
            s += " title '" + labels[k] + "'";
    }
    s += "\npause -1\n";
    return s;
}

}  // namespace msre::cli
