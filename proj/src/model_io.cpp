#include "ltr/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace ltr::model_io {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'L', 'T', 'R', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32_le(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                           char((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

std::uint32_t get_u32_le(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    return std::uint32_t(bytes[0]) | (std::uint32_t(bytes[1]) << 8) |
           (std::uint32_t(bytes[2]) << 16) | (std::uint32_t(bytes[3]) << 24);
}

void put_doubles_le(std::ostream& out, const double* data, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &data[i], sizeof bits);
        char bytes[8];
        for (int b = 0; b < 8; ++b) bytes[b] = char((bits >> (8 * b)) & 0xff);
        out.write(bytes, 8);
    }
}

void get_doubles_le(std::istream& in, double* data, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        unsigned char bytes[8];
        in.read(reinterpret_cast<char*>(bytes), 8);
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= std::uint64_t(bytes[b]) << (8 * b);
        std::memcpy(&data[i], &bits, sizeof bits);
    }
}

json params_header(const ParamStore& store) {
    json params = json::array();
    for (const ParamSlot& slot : store) {
        params.push_back({{"name", slot.name},
                          {"rows", slot.value.rows()},
                          {"cols", slot.value.cols()}});
    }
    return params;
}

void write_file(const std::filesystem::path& path, const json& header,
                const std::vector<const ParamStore*>& stores) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("model save: cannot open " + path.string());
    }
    const std::string header_text = header.dump();
    out.write(kMagic, sizeof kMagic);
    put_u32_le(out, std::uint32_t(header_text.size()));
    out.write(header_text.data(), std::streamsize(header_text.size()));
    for (const ParamStore* store : stores) {
        for (const ParamSlot& slot : *store) {
            put_doubles_le(out, slot.value.data(), slot.value.size());
        }
    }
    if (!out) {
        throw std::runtime_error("model save: write failed for " + path.string());
    }
}

json read_header(std::istream& in, const std::filesystem::path& path) {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw std::runtime_error("model load: " + path.string() + " is not a model file");
    }
    const std::uint32_t header_len = get_u32_le(in);
    std::string header_text(header_len, '\0');
    in.read(header_text.data(), header_len);
    if (!in) {
        throw std::runtime_error("model load: truncated header in " + path.string());
    }
    json header = json::parse(header_text, nullptr, false);
    if (header.is_discarded()) {
        throw std::runtime_error("model load: malformed header in " + path.string());
    }
    if (header.value("format_version", 0u) != kFormatVersion) {
        throw std::runtime_error("model load: unsupported format version in " +
                                 path.string());
    }
    return header;
}

void read_params(std::istream& in, const json& params, ParamStore& store,
                 const std::filesystem::path& path) {
    for (const json& p : params) {
        const std::string name = p.at("name").get<std::string>();
        Matrix value(p.at("rows").get<std::size_t>(), p.at("cols").get<std::size_t>());
        get_doubles_le(in, value.data(), value.size());
        if (!in) {
            throw std::runtime_error("model load: truncated parameter block '" + name +
                                     "' in " + path.string());
        }
        store.add(name, std::move(value));
    }
}

}  // namespace

void save_ranknet(const ranker::RankNetModel& model, const std::filesystem::path& path) {
    json header = {{"format_version", kFormatVersion},
                   {"mode", kModeRankNetFeatures},
                   {"config",
                    {{"input_dim", model.config.input_dim},
                     {"hidden", model.config.hidden}}},
                   {"params", params_header(model.params)}};
    write_file(path, header, {&model.params});
}

ranker::RankNetModel load_ranknet(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("model load: cannot open " + path.string());
    }
    const json header = read_header(in, path);
    if (header.value("mode", "") != kModeRankNetFeatures) {
        throw std::runtime_error("model load: " + path.string() +
                                 " is not a feature-mode model");
    }
    ranker::RankNetModel model;
    model.config.input_dim = header.at("config").at("input_dim").get<std::size_t>();
    model.config.hidden = header.at("config").at("hidden").get<std::size_t>();
    read_params(in, header.at("params"), model.params, path);
    return model;
}

void save_convranknet(const ranker::ConvRankNetModel& model,
                      const std::filesystem::path& path) {
    json filters = json::array();
    for (const encoder::FilterSpec& f : model.enc.config.filters) {
        filters.push_back({{"size", f.size}, {"copies", f.copies}});
    }
    json header = {{"format_version", kFormatVersion},
                   {"mode", kModeConvRankNet},
                   {"config",
                    {{"filters", filters},
                     {"embedding_dim", model.enc.config.embedding_dim},
                     {"dropout_p", model.enc.config.dropout_p},
                     {"hidden", model.net.config.hidden}}},
                   {"encoder_params", params_header(model.enc.params)},
                   {"net_params", params_header(model.net.params)}};
    write_file(path, header, {&model.enc.params, &model.net.params});
}

ranker::ConvRankNetModel load_convranknet(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("model load: cannot open " + path.string());
    }
    const json header = read_header(in, path);
    if (header.value("mode", "") != kModeConvRankNet) {
        throw std::runtime_error("model load: " + path.string() +
                                 " is not a text-mode model");
    }
    ranker::ConvRankNetModel model;
    const json& config = header.at("config");
    model.enc.config.filters.clear();
    for (const json& f : config.at("filters")) {
        model.enc.config.filters.push_back(
            {f.at("size").get<std::size_t>(), f.at("copies").get<std::size_t>()});
    }
    model.enc.config.embedding_dim = config.at("embedding_dim").get<std::size_t>();
    model.enc.config.dropout_p = config.at("dropout_p").get<double>();
    model.net.config.input_dim = model.enc.config.feature_dim();
    model.net.config.hidden = config.at("hidden").get<std::size_t>();
    read_params(in, header.at("encoder_params"), model.enc.params, path);
    read_params(in, header.at("net_params"), model.net.params, path);
    return model;
}

std::string peek_mode(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("model load: cannot open " + path.string());
    }
    const json header = read_header(in, path);
    const std::string mode = header.value("mode", "");
    if (mode.empty()) {
        throw std::runtime_error("model load: missing mode in " + path.string());
    }
    return mode;
}

}  // namespace ltr::model_io
