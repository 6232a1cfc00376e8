#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "greenmine/error.hpp"
#include "greenmine/lm.hpp"

using namespace greenmine;

namespace {

TokenStream corpus_file(const std::string& name) {
  std::ifstream in(testing::data_dir() / "oracle" / name);
  REQUIRE(in);
  return read_corpus(in, name);
}

NGramModel round_trip(const NGramModel& model) {
  std::stringstream file;
  export_arpa(model, file);
  return import_arpa(file);
}

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    import_arpa(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("export then import preserves scores") {
  const NGramModel model = build_model(corpus_file("train.txt"), 3);
  const NGramModel back = round_trip(model);
  CHECK(back.order() == 3);
  for (int k = 1; k <= 3; ++k) CHECK(back.entries(k).size() == model.entries(k).size());
  for (int i = 1; i <= 5; ++i) {
    const TokenStream text = corpus_file("heldout_" + std::to_string(i) + ".txt");
    CHECK(std::abs(cross_entropy(model, text).cross_entropy_bits -
                   cross_entropy(back, text).cross_entropy_bits) < 1e-6);
  }
}

TEST_CASE("degenerate toy model survives the round trip") {
  const NGramModel model = build_model(corpus_file("abac.txt"), 2);
  const NGramModel back = round_trip(model);
  const TokenStream text = corpus_file("abac.txt");
  CHECK(cross_entropy(back, text).cross_entropy_bits ==
        doctest::Approx(cross_entropy(model, text).cross_entropy_bits).epsilon(1e-9));
}

TEST_CASE("reference toolkit ARPA scores like the native model") {
  std::ifstream in(testing::data_dir() / "oracle" / "train.o3.arpa");
  const NGramModel reference = import_arpa(in);
  const NGramModel model = build_model(corpus_file("train.txt"), 3);
  for (int i = 1; i <= 5; ++i) {
    const TokenStream text = corpus_file("heldout_" + std::to_string(i) + ".txt");
    CHECK(std::abs(cross_entropy(model, text).cross_entropy_bits -
                   cross_entropy(reference, text).cross_entropy_bits) < 1e-4);
  }
}

TEST_CASE("malformed files report their line") {
  CHECK(parse_error_line("\\data\\\n\n\\1-grams:\n-1\ta\n\\end\\\n") != 0);
  CHECK(parse_error_line("no data section\n") != 0);
  CHECK(parse_error_line("\\data\\\nngram 1=1\n\n\\2-grams:\n-1\ta b\n\\end\\\n") == 4);
  CHECK(parse_error_line("\\data\\\nngram 1=2\n\n\\1-grams:\n-1\ta\nxx\tb\n\n\\end\\\n") == 6);
  CHECK(parse_error_line("\\data\\\nngram 1=1\n\n\\1-grams:\n-1\ta\n-1\tb\n\\end\\\n") == 6);
  CHECK(parse_error_line("\\data\\\nngram 1=1\n\n\\1-grams:\n-1\ta\n\n") != 0);
}

TEST_CASE("header text before data is ignored and missing markers are added") {
  std::istringstream in("written by hand\n\n\\data\\\nngram 1=2\n\n\\1-grams:\n-0.5\ta\n-0.5\t</s>\n\n\\end\\\n");
  const NGramModel model = import_arpa(in);
  CHECK(model.vocabulary().contains("<unk>"));
  CHECK(model.vocabulary().contains("<s>"));
  CHECK(model.entries(1).size() == 4);
}
