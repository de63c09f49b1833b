#include "avocast/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace avocast {

static_assert(std::endian::native == std::endian::little,
              "checkpoint layout assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'A', 'V', 'C', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_i64(std::ostream& out, std::int64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_string(std::ostream& out, const std::string& s) {
  put_i64(out, static_cast<std::int64_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_tensor(std::ostream& out, const TensorPtr& t) {
  put_i64(out, t->ndim());
  for (std::int64_t e : t->shape()) put_i64(out, e);
  const auto data = t->data();
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
}

struct Reader {
  std::istream& in;
  const std::string& path;

  void fail(const std::string& why) const {
    throw std::runtime_error("checkpoint: '" + path + "': " + why);
  }

  void raw(void* dst, std::size_t bytes) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(bytes));
    if (!in) fail("truncated file");
  }

  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
  }
  std::int64_t i64() {
    std::int64_t v;
    raw(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    raw(&v, sizeof v);
    return v;
  }
  std::string str() {
    std::int64_t n = i64();
    if (n < 0 || n > (1 << 28)) fail("bad string length");
    std::string s(static_cast<std::size_t>(n), '\0');
    if (n > 0) raw(s.data(), s.size());
    return s;
  }
  TensorPtr tensor(bool requires_grad) {
    std::int64_t nd = i64();
    if (nd < 0 || nd > 8) fail("bad tensor rank");
    std::vector<std::int64_t> shape(static_cast<std::size_t>(nd));
    std::int64_t numel = 1;
    for (auto& e : shape) {
      e = i64();
      if (e < 0) fail("bad tensor extent");
      numel *= e;
    }
    std::vector<double> data(static_cast<std::size_t>(numel));
    if (numel > 0) raw(data.data(), data.size() * sizeof(double));
    return Tensor::create(std::move(shape), std::move(data), requires_grad);
  }
};

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot write '" + path.string() + "'");
  out.write(kMagic, sizeof kMagic);
  put_u32(out, kVersion);

  const ModelConfig& c = ckpt.config;
  put_i64(out, c.tcn.input_channels);
  put_i64(out, c.tcn.hidden_channels);
  put_i64(out, c.tcn.num_blocks);
  put_i64(out, c.tcn.kernel_size);
  put_i64(out, c.tcn.dilation_base);
  put_i64(out, c.window_len);
  put_i64(out, c.mlp_hidden);
  put_i64(out, c.hidden_dim);
  put_i64(out, c.attn_dim);

  put_f64(out, ckpt.ratios.train);
  put_f64(out, ckpt.ratios.val);
  put_f64(out, ckpt.ratios.test);

  for (const ColumnScaling& s : ckpt.spec.numeric_scalings()) {
    put_f64(out, s.mean);
    put_f64(out, s.stddev);
  }
  put_i64(out, static_cast<std::int64_t>(ckpt.spec.type_vocabulary().size()));
  for (const std::string& s : ckpt.spec.type_vocabulary()) put_string(out, s);
  put_i64(out, static_cast<std::int64_t>(ckpt.spec.region_vocabulary().size()));
  for (const std::string& s : ckpt.spec.region_vocabulary()) put_string(out, s);

  auto named = ckpt.params.named();
  put_i64(out, static_cast<std::int64_t>(named.size()));
  for (const auto& [name, tensor] : named) {
    put_string(out, name);
    put_tensor(out, tensor);
  }

  put_string(out, ckpt.metadata);
  if (!out) throw std::runtime_error("io: failed writing '" + path.string() + "'");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open '" + path.string() + "'");
  const std::string path_str = path.string();
  Reader r{in, path_str};

  char magic[4];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) r.fail("not a checkpoint file");
  std::uint32_t version = r.u32();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));

  Checkpoint ckpt;
  ModelConfig& c = ckpt.config;
  c.tcn.input_channels = r.i64();
  c.tcn.hidden_channels = r.i64();
  c.tcn.num_blocks = r.i64();
  c.tcn.kernel_size = r.i64();
  c.tcn.dilation_base = r.i64();
  c.window_len = r.i64();
  c.mlp_hidden = r.i64();
  c.hidden_dim = r.i64();
  c.attn_dim = r.i64();

  ckpt.ratios.train = r.f64();
  ckpt.ratios.val = r.f64();
  ckpt.ratios.test = r.f64();

  std::array<ColumnScaling, kNumericColumns.size()> numeric{};
  for (ColumnScaling& s : numeric) {
    s.mean = r.f64();
    s.stddev = r.f64();
  }
  std::vector<std::string> type_vocab(static_cast<std::size_t>(r.i64()));
  for (auto& s : type_vocab) s = r.str();
  std::vector<std::string> region_vocab(static_cast<std::size_t>(r.i64()));
  for (auto& s : region_vocab) s = r.str();
  ckpt.spec = FeatureSpec::from_parts(numeric, std::move(type_vocab), std::move(region_vocab));

  std::int64_t tensor_count = r.i64();
  std::map<std::string, TensorPtr> tensors;
  for (std::int64_t i = 0; i < tensor_count; ++i) {
    std::string name = r.str();
    tensors[name] = r.tensor(true);
  }

  auto take = [&](const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) r.fail("missing tensor '" + name + "'");
    return it->second;
  };
  ModelParams& p = ckpt.params;
  for (std::int64_t b = 0; b < c.tcn.num_blocks; ++b) {
    std::string prefix = "tcn.block" + std::to_string(b) + ".";
    TcnBlockParams block;
    block.kernel = take(prefix + "kernel");
    block.bias = take(prefix + "bias");
    auto it = tensors.find(prefix + "proj");
    if (it != tensors.end()) block.residual_proj = it->second;
    p.blocks.push_back(std::move(block));
  }
  p.mlp_w1 = take("mlp.w1");
  p.mlp_b1 = take("mlp.b1");
  p.mlp_w2 = take("mlp.w2");
  p.mlp_b2 = take("mlp.b2");
  p.attn_w = take("attn.w");
  p.attn_b = take("attn.b");
  p.attn_v = take("attn.v");
  p.out_w = take("out.w");
  p.out_b = take("out.b");

  ckpt.metadata = r.str();
  return ckpt;
}

}  // namespace avocast
