#include "highlight/extractor/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "highlight/error.hpp"

namespace highlight::extractor {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json config_json(const ModelConfig& c) {
    return {{"embed_dim", c.embed_dim},
            {"encoder_layers", c.encoder_layers},
            {"attention_heads", c.attention_heads},
            {"ff_dim", c.ff_dim},
            {"max_sentence_len", c.max_sentence_len},
            {"max_doc_positions", c.max_doc_positions},
            {"lambda", c.lambda},
            {"dropout_p", c.dropout_p},
            {"init_range", c.init_range},
            {"seed", c.seed}};
}

ModelConfig config_from(const json& j) {
    ModelConfig c;
    c.embed_dim = j.at("embed_dim").get<std::size_t>();
    c.encoder_layers = j.at("encoder_layers").get<std::size_t>();
    c.attention_heads = j.at("attention_heads").get<std::size_t>();
    c.ff_dim = j.at("ff_dim").get<std::size_t>();
    c.max_sentence_len = j.at("max_sentence_len").get<std::size_t>();
    c.max_doc_positions = j.at("max_doc_positions").get<std::size_t>();
    c.lambda = j.at("lambda").get<double>();
    c.dropout_p = j.at("dropout_p").get<double>();
    c.init_range = j.at("init_range").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.validate();
    return c;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ExtractorModel& model) {
    ordered_json tensors = ordered_json::object();
    for_each_tensor(model.params, [&](const std::string& name, const Matrix& m) {
        tensors[name] = {{"rows", m.rows()},
                         {"cols", m.cols()},
                         {"data", std::vector<double>(m.data(), m.data() + m.size())}};
    });
    ordered_json j = {{"format", kCheckpointFormat},
                      {"version", kCheckpointVersion},
                      {"config", config_json(model.config)},
                      {"vocab", model.vocab.tokens()},
                      {"parameters", std::move(tensors)}};
    out << j.dump() << '\n';
}

ExtractorModel read_checkpoint(std::istream& in) {
    try {
        json j = json::parse(in);
        if (j.value("format", "") != kCheckpointFormat) throw Error("not a highlight extractor checkpoint");
        if (!j.contains("version")) throw Error("checkpoint has no version field");
        int version = j["version"].get<int>();
        if (version != kCheckpointVersion)
            throw Error("unsupported checkpoint version " + std::to_string(version));
        ExtractorModel model;
        model.config = config_from(j.at("config"));
        model.vocab = Vocab(j.at("vocab").get<std::vector<std::string>>());
        model.params = zero_parameters(model.config, model.vocab.size());
        const json& tensors = j.at("parameters");
        for_each_tensor(model.params, [&](const std::string& name, Matrix& m) {
            if (!tensors.contains(name)) throw Error("checkpoint is missing tensor " + name);
            const json& t = tensors[name];
            if (t.at("rows").get<long>() != m.rows() || t.at("cols").get<long>() != m.cols())
                throw Error("checkpoint tensor " + name + " has the wrong shape");
            auto data = t.at("data").get<std::vector<double>>();
            if (data.size() != static_cast<std::size_t>(m.size()))
                throw Error("checkpoint tensor " + name + " has the wrong element count");
            std::copy(data.begin(), data.end(), m.data());
        });
        if (!all_finite(model.params)) throw Error("checkpoint contains non-finite parameters");
        return model;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::filesystem::path& path, const ExtractorModel& model) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write checkpoint " + path.string());
    write_checkpoint(out, model);
}

ExtractorModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open checkpoint " + path.string());
    return read_checkpoint(in);
}

}  // namespace highlight::extractor
