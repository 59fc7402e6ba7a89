#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>

#include "gsk/errors.hpp"

namespace gsk::cli {

namespace {

std::set<const CLI::Option*>& input_options() {
  static std::set<const CLI::Option*> inputs;
  return inputs;
}

nlohmann::ordered_json option_value(const CLI::Option* opt) {
  if (opt->get_type_size() == 0) return opt->count() > 0;
  if (opt->count() == 0) {
    if (opt->get_default_str().empty()) return nullptr;
    return opt->get_default_str();
  }
  const auto& results = opt->results();
  if (opt->get_expected_max() > 1) return results;
  return results.back();
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

void mark_input(CLI::Option* opt) { input_options().insert(opt); }

nlohmann::ordered_json build_manifest(const CLI::App& root, const std::optional<std::uint64_t>& seed,
                                      const std::string& version) {
  nlohmann::ordered_json m;
  m["tool"] = root.get_name();
  m["version"] = version;

  std::vector<const CLI::App*> chain{&root};
  while (true) {
    const auto subs = chain.back()->get_subcommands();
    if (subs.empty()) break;
    chain.push_back(subs.front());
  }
  std::string sub;
  for (std::size_t i = 1; i < chain.size(); ++i) sub += (i > 1 ? " " : "") + chain[i]->get_name();
  m["subcommand"] = sub;

  nlohmann::ordered_json flags = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const CLI::App* app : chain) {
    for (const CLI::Option* opt : app->get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help" || name == "help-all" || name == "version") continue;
      flags[name] = option_value(opt);
      if (input_options().count(opt) && opt->count() > 0) {
        const std::string path = opt->results().back();
        inputs[name] = {{"path", path}, {"sha256", sha256_file(path)}};
      }
    }
  }
  m["flags"] = flags;
  m["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  m["inputs"] = inputs;
  return m;
}

}  // namespace gsk::cli
