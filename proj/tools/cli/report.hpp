#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace msre::cli {

std::string sha256_hex(const std::string& bytes);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

struct Assertion
{
    std::string name;
    nlohmann::json value;
    nlohmann::json threshold;
    bool pass = false;
};

nlohmann::json to_json(const Assertion& a);

/// Comma separated table built in memory.
class Csv
{
  public:
    explicit Csv(const std::vector<std::string>& header);

    Csv& operator<<(double x);
    Csv& operator<<(std::int64_t x);
    Csv& operator<<(std::uint64_t x);
    Csv& operator<<(int x) { return *this << static_cast<std::int64_t>(x); }
    Csv& operator<<(const std::string& s);
    void end_row();

    const std::string& str() const noexcept { return text_; }

  private:
    void sep();
    std::string text_;
    bool row_start_ = true;
};

/*!
 * Every file of a run goes through here: names are plain file names inside
 * the output directory, and each write is recorded with its SHA-256.
 */
class OutputDir
{
  public:
    explicit OutputDir(std::string dir);

    const std::string& path() const noexcept { return dir_; }
    void write(const std::string& name, const std::string& content);
    nlohmann::json manifest() const;

  private:
    struct Entry
    {
        std::string name;
        std::string sha256;
        std::size_t bytes;
    };
    std::string dir_;
    std::vector<Entry> entries_;
};

/// gnuplot script for columns (x, y) of a CSV, optionally on log axes.
std::string gnuplot_script(const std::string& csv, const std::string& title,
                           const std::vector<std::pair<int, int>>& columns,
                           const std::vector<std::string>& labels, bool loglog);

}  // namespace msre::cli
