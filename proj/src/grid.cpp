#include "semwave/grid.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "semwave/kernels.hpp"

namespace semwave {

static_assert(std::endian::native == std::endian::little,
              "field snapshot format assumes a little-endian host");

double WaveField::norm() const {
    return kern::abs2_sum(samples.data(), samples.size()) * grid.cell_volume();
}

void save_field(const WaveField& field, const std::filesystem::path& base) {
    field.validate();
    nlohmann::json j;
    j["dims"] = field.grid.dims();
    j["time"] = field.time;
    auto& extents = j["extents"] = nlohmann::json::array();
    auto& counts = j["counts"] = nlohmann::json::array();
    for (const auto& a : field.grid.axes) {
        extents.push_back({a.lo, a.hi});
        counts.push_back(a.n);
    }
    std::filesystem::path jpath = base;
    jpath += ".json";
    std::ofstream js(jpath);
    if (!js) throw std::runtime_error("cannot write " + jpath.string());
    js << j.dump(2) << '\n';

    std::filesystem::path bpath = base;
    bpath += ".bin";
    std::ofstream bs(bpath, std::ios::binary);
    if (!bs) throw std::runtime_error("cannot write " + bpath.string());
    bs.write(reinterpret_cast<const char*>(field.samples.data()),
             static_cast<std::streamsize>(field.samples.size() * sizeof(cplx)));
}

WaveField load_field(const std::filesystem::path& base) {
    std::filesystem::path jpath = base;
    jpath += ".json";
    std::ifstream js(jpath);
    if (!js) throw std::runtime_error("cannot read " + jpath.string());
    nlohmann::json j = nlohmann::json::parse(js);

    WaveField field;
    field.time = j.at("time").get<double>();
    const auto& extents = j.at("extents");
    const auto& counts = j.at("counts");
    for (std::size_t d = 0; d < j.at("dims").get<std::size_t>(); ++d) {
        field.grid.axes.push_back(Axis{extents.at(d).at(0).get<double>(),
                                       extents.at(d).at(1).get<double>(),
                                       counts.at(d).get<std::size_t>()});
    }

    std::filesystem::path bpath = base;
    bpath += ".bin";
    std::ifstream bs(bpath, std::ios::binary);
    if (!bs) throw std::runtime_error("cannot read " + bpath.string());
    field.samples.resize(field.grid.size());
    bs.read(reinterpret_cast<char*>(field.samples.data()),
            static_cast<std::streamsize>(field.samples.size() * sizeof(cplx)));
    if (!bs) throw std::runtime_error("truncated snapshot: " + bpath.string());
    field.validate();
    return field;
}

} // namespace semwave
