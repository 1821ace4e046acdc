#include "msre/surface_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "msre/errors.hpp"

namespace msre {
namespace {

constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "surface files are written in host order on little-endian hosts");

template<class T>
void put(std::ostream& out, T value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template<class T>
T get(std::istream& in)
{
    T value{};
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
        throw ContractError("truncated surface file");
    return value;
}

}  // namespace

void write_surface(std::ostream& out, const Surface& s)
{
    const auto& dom = s.domain();
    const int n = s.components();
    out.write("MSRE", 4);
    put<std::uint32_t>(out, kVersion);
    put<std::int64_t>(out, dom.dim());
    put<std::int64_t>(out, n);
    for (auto x : dom.lo())
        put<std::int64_t>(out, x);
    for (auto x : dom.hi())
        put<std::int64_t>(out, x);
    for (double x : s.interior())
        put<double>(out, x);

    std::uint64_t count = 0;
    for (std::size_t i = 0; i < dom.shell_size(); ++i)
    {
        auto v = s.shell_at(i);
        for (double x : v)
        {
            if (x != 0.0)
            {
                ++count;
                break;
            }
        }
    }
    put<std::uint64_t>(out, count);
    for (std::size_t i = 0; i < dom.shell_size(); ++i)
    {
        auto v = s.shell_at(i);
        bool nonzero = false;
        for (double x : v)
            nonzero = nonzero || x != 0.0;
        if (!nonzero)
            continue;
        for (auto c : dom.shell_vertex(i))
            put<std::int64_t>(out, c);
        for (double x : v)
            put<double>(out, x);
    }
    if (!out)
        throw Error("failed to write surface");
}

Surface read_surface(std::istream& in)
{
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "MSRE", 4) != 0)
        throw ContractError("not a surface file");
    auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw ContractError("unsupported surface file version " + std::to_string(version));
    auto d = get<std::int64_t>(in);
    auto n = get<std::int64_t>(in);
    if (d < 1 || d > 64 || n < 1 || n > 64)
        throw ContractError("corrupt surface header");
    Vertex lo(d), hi(d);
    for (auto& x : lo)
        x = get<std::int64_t>(in);
    for (auto& x : hi)
        x = get<std::int64_t>(in);
    Surface s(BoxDomain(lo, hi), static_cast<int>(n));
    for (double& x : s.interior())
        x = get<double>(in);
    auto count = get<std::uint64_t>(in);
    if (count > s.domain().shell_size())
        throw ContractError("corrupt surface shell count");
    Vertex v(d);
    Point value(n);
    for (std::uint64_t r = 0; r < count; ++r)
    {
        for (auto& c : v)
            c = get<std::int64_t>(in);
        for (auto& x : value)
            x = get<double>(in);
        if (!s.domain().shell_index(v))
            throw ContractError("surface record outside the shell");
        s.set(v, value);
    }
    return s;
}

void save_surface(const std::string& path, const Surface& s)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    write_surface(out, s);
}

Surface load_surface(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    return read_surface(in);
}

}  // namespace msre
