#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "highlight/error.hpp"
#include "highlight/extractor/checkpoint.hpp"

using namespace highlight;
using namespace highlight::extractor;

namespace {

ExtractorModel model() {
    ExtractorModel m;
    m.config.embed_dim = 8;
    m.config.ff_dim = 16;
    m.config.max_sentence_len = 9;
    m.config.max_doc_positions = 4;
    m.config.lambda = 0.25;
    m.config.seed = 99;
    m.vocab = Vocab::build({{"alpha", "beta", "gamma"}});
    m.params = init_parameters(m.config, m.vocab.size());
    m.params.final_ln_gain(0, 3) = 1.0 / 3.0;
    return m;
}

std::string serialise(const ExtractorModel& m) {
    std::ostringstream out;
    write_checkpoint(out, m);
    return out.str();
}

}  // namespace

TEST(Checkpoint, RoundTripIsExact) {
    auto m = model();
    std::istringstream in(serialise(m));
    auto back = read_checkpoint(in);
    EXPECT_EQ(back.vocab, m.vocab);
    EXPECT_EQ(back.config.embed_dim, 8u);
    EXPECT_EQ(back.config.max_sentence_len, 9u);
    EXPECT_EQ(back.config.lambda, 0.25);
    EXPECT_EQ(back.config.seed, 99u);
    EXPECT_EQ(flatten(back.params), flatten(m.params));
}

TEST(Checkpoint, FileRoundTrip) {
    auto m = model();
    auto path = std::filesystem::temp_directory_path() / "highlight_checkpoint_test.json";
    save_checkpoint(path, m);
    auto back = load_checkpoint(path);
    std::filesystem::remove(path);
    EXPECT_EQ(flatten(back.params), flatten(m.params));
    EXPECT_THROW(load_checkpoint(path), Error);
}

TEST(Checkpoint, RejectsWrongVersion) {
    auto j = nlohmann::json::parse(serialise(model()));
    j["version"] = 2;
    std::istringstream in(j.dump());
    EXPECT_THROW(read_checkpoint(in), Error);
    j.erase("version");
    std::istringstream missing(j.dump());
    EXPECT_THROW(read_checkpoint(missing), Error);
}

TEST(Checkpoint, RejectsWrongShapes) {
    auto j = nlohmann::json::parse(serialise(model()));
    for (auto& [name, tensor] : j["parameters"].items()) {
        tensor["rows"] = tensor["rows"].get<long>() + 1;
        break;
    }
    std::istringstream in(j.dump());
    EXPECT_THROW(read_checkpoint(in), Error);
}

TEST(Checkpoint, RejectsGarbage) {
    std::istringstream in("not json");
    EXPECT_THROW(read_checkpoint(in), Error);
    std::istringstream other("{\"format\":\"something-else\",\"version\":1}");
    EXPECT_THROW(read_checkpoint(other), Error);
}
