#include "tocgen/detector.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "tocgen/errors.hpp"
#include "tocgen/layout_io.hpp"
#include "tocgen/nn/serialize.hpp"
#include "tocgen/text_norm.hpp"

namespace tocgen {

using nlohmann::ordered_json;

// ---- CharVocab --------------------------------------------------------------

CharVocab CharVocab::build(const std::vector<std::string>& texts, int min_freq,
                           int max_size) {
  std::map<char32_t, long> freq;
  for (const auto& text : texts) {
    for (char32_t c : decode_utf8(normalize_text(text))) ++freq[c];
  }
  std::vector<std::pair<char32_t, long>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  CharVocab vocab;
  for (const auto& [c, count] : ranked) {
    if (count < min_freq) break;
    if (static_cast<int>(vocab.chars.size()) >= max_size) break;
    vocab.chars.push_back(c);
  }
  if (vocab.chars.empty()) {
    // degenerate corpora (tiny unit-test fixtures) fall back to ASCII
    return default_latin();
  }
  std::sort(vocab.chars.begin(), vocab.chars.end());
  return vocab;
}

CharVocab CharVocab::default_latin() {
  CharVocab vocab;
  for (char32_t c = 0x20; c < 0x7F; ++c) vocab.chars.push_back(c);
  for (char32_t c = 0xC0; c <= 0xFF; ++c) {
    if (c != 0xD7 && c != 0xF7) vocab.chars.push_back(c);
  }
  return vocab;
}

int CharVocab::index_of(char32_t c) const {
  auto it = std::lower_bound(chars.begin(), chars.end(), c);
  if (it != chars.end() && *it == c) {
    return static_cast<int>(it - chars.begin()) + 2;
  }
  return 1;  // <unk>
}

std::vector<int> encode_chars(const std::string& s, const CharVocab& vocab, int l_c) {
  std::u32string cps = decode_utf8(s);
  std::vector<int> out(static_cast<size_t>(l_c), 0);  // <pad>
  for (int i = 0; i < l_c && i < static_cast<int>(cps.size()); ++i) {
    out[static_cast<size_t>(i)] = vocab.index_of(cps[static_cast<size_t>(i)]);
  }
  return out;
}

// ---- model ------------------------------------------------------------------

struct DetectorModel::ForwardCache {
  std::vector<int> char_indices;
  nn::Tensor embedded;
  std::vector<nn::Conv1D::Cache> conv;
  std::vector<nn::MaxPool1D::Cache> pool;
  std::vector<int> pooled_rows;
  nn::Dense::Cache fc1;
  nn::Tensor hidden_relu;  // post-ReLU fc1 output
  nn::Tensor dropout_mask;
  nn::Dense::Cache fc2;
};

DetectorModel::DetectorModel(DetectorConfig cfg, CharVocab chars, TitleVocab titles,
                             nn::Rng& rng)
    : cfg_(std::move(cfg)), chars_(std::move(chars)), titles_(std::move(titles)) {
  feature_dim_ = feature_layout().total;
  for (const auto& spec : cfg_.convs) {
    if (cfg_.max_chars < spec.filter) {
      throw DataError("detector: l_c shorter than filter width");
    }
  }
  emb_ = nn::Embedding(chars_.size(), cfg_.char_dim);
  init_orthogonal(emb_.table, rng);
  flat_dim_ = 0;
  for (const auto& spec : cfg_.convs) {
    convs_.emplace_back(cfg_.char_dim, spec.kernels, spec.filter, rng);
    flat_dim_ += spec.kernels *
                 nn::conv_maxpool_out_len(cfg_.max_chars, spec.filter, spec.pool);
  }
  fc1_ = nn::Dense(flat_dim_, cfg_.fc_dim, rng);
  fc2_ = nn::Dense(cfg_.fc_dim + feature_dim_, 2, rng);
}

std::array<double, 2> DetectorModel::forward_impl(const std::vector<int>& char_indices,
                                                  const FeatureVector& features,
                                                  bool train, nn::Rng* rng,
                                                  ForwardCache* cache) const {
  if (static_cast<int>(features.values.size()) != feature_dim_) {
    throw ModelVersionError("detector: feature vector length " +
                            std::to_string(features.values.size()) +
                            " does not match model layout (" +
                            std::to_string(feature_dim_) + ")");
  }
  nn::Tensor embedded = emb_.forward(char_indices);

  nn::Tensor flat({1, flat_dim_});
  int offset = 0;
  if (cache) {
    cache->char_indices = char_indices;
    cache->conv.resize(convs_.size());
    cache->pool.resize(convs_.size());
    cache->pooled_rows.resize(convs_.size());
  }
  for (size_t k = 0; k < convs_.size(); ++k) {
    nn::Tensor conv_out = convs_[k].forward(embedded, cache ? &cache->conv[k] : nullptr);
    nn::MaxPool1D pooler{cfg_.convs[k].pool};
    nn::Tensor pooled = pooler.forward(conv_out, cache ? &cache->pool[k] : nullptr);
    if (cache) cache->pooled_rows[k] = pooled.rows();
    std::copy(pooled.data.begin(), pooled.data.end(), flat.data.begin() + offset);
    offset += static_cast<int>(pooled.data.size());
  }
  if (cache) cache->embedded = std::move(embedded);

  nn::Tensor hidden = fc1_.forward(flat, cache ? &cache->fc1 : nullptr);
  nn::Tensor hidden_relu = nn::relu(hidden);
  nn::Tensor dropped = nn::dropout_forward(hidden_relu, cfg_.dropout, train, rng,
                                           cache ? &cache->dropout_mask : nullptr);
  if (cache) cache->hidden_relu = std::move(hidden_relu);

  nn::Tensor joined({1, cfg_.fc_dim + feature_dim_});
  std::copy(dropped.data.begin(), dropped.data.end(), joined.data.begin());
  std::copy(features.values.begin(), features.values.end(),
            joined.data.begin() + cfg_.fc_dim);
  nn::Tensor logits = fc2_.forward(joined, cache ? &cache->fc2 : nullptr);
  nn::Tensor probs = nn::softmax_rows(logits);
  return {probs.data[0], probs.data[1]};
}

std::array<double, 2> DetectorModel::forward(const std::vector<int>& char_indices,
                                             const FeatureVector& features) const {
  return forward_impl(char_indices, features, false, nullptr, nullptr);
}

std::array<double, 2> DetectorModel::predict(const std::string& raw_text,
                                             const FeatureVector& features) const {
  return forward(encode_chars(normalize_text(raw_text), chars_, cfg_.max_chars),
                 features);
}

void DetectorModel::backward_impl(const ForwardCache& cache, const nn::Tensor& d_logits) {
  nn::Tensor d_joined = fc2_.backward(cache.fc2, d_logits);
  nn::Tensor d_dropped({1, cfg_.fc_dim});
  std::copy_n(d_joined.data.begin(), cfg_.fc_dim, d_dropped.data.begin());
  nn::Tensor d_hidden_relu = nn::dropout_backward(cache.dropout_mask, d_dropped);
  nn::Tensor d_hidden = nn::relu_backward(cache.hidden_relu, d_hidden_relu);
  nn::Tensor d_flat = fc1_.backward(cache.fc1, d_hidden);

  nn::Tensor d_embedded({cache.embedded.rows(), cache.embedded.cols()});
  int offset = 0;
  for (size_t k = 0; k < convs_.size(); ++k) {
    int rows = cache.pooled_rows[k];
    int cols = cfg_.convs[k].kernels;
    nn::Tensor d_pooled({rows, cols});
    std::copy_n(d_flat.data.begin() + offset, static_cast<size_t>(rows) * cols,
                d_pooled.data.begin());
    offset += rows * cols;
    nn::MaxPool1D pooler{cfg_.convs[k].pool};
    nn::Tensor d_conv = pooler.backward(cache.pool[k], d_pooled, cols);
    nn::Tensor d_emb_part = convs_[k].backward(cache.conv[k], d_conv);
    for (size_t i = 0; i < d_embedded.data.size(); ++i) {
      d_embedded.data[i] += d_emb_part.data[i];
    }
  }
  emb_.backward(cache.char_indices, d_embedded);
}

void DetectorModel::zero_grad() {
  emb_.zero_grad();
  for (auto& conv : convs_) conv.zero_grad();
  fc1_.zero_grad();
  fc2_.zero_grad();
}

std::vector<nn::ParamRef> DetectorModel::params() {
  std::vector<nn::ParamRef> out = emb_.params("emb");
  for (size_t k = 0; k < convs_.size(); ++k) {
    for (auto& p : convs_[k].params("conv" + std::to_string(k))) out.push_back(p);
  }
  for (auto& p : fc1_.params("fc1")) out.push_back(p);
  for (auto& p : fc2_.params("fc2")) out.push_back(p);
  return out;
}

// ---- training ---------------------------------------------------------------

namespace {

struct EncodedSample {
  std::vector<int> char_indices;
  const FeatureVector* features;
  int label;
};

std::array<double, 2> class_weights(const std::vector<DetectorSample>& samples) {
  std::array<long, 2> counts{0, 0};
  for (const auto& s : samples) {
    if (s.label < 0 || s.label > 1) throw DataError("detector training: bad label");
    ++counts[static_cast<size_t>(s.label)];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw DataError("detector training: corpus must contain both classes");
  }
  double total = static_cast<double>(counts[0] + counts[1]);
  return {total / (2.0 * static_cast<double>(counts[0])),
          total / (2.0 * static_cast<double>(counts[1]))};
}

}  // namespace

DetectorModel train_detector(const std::vector<DetectorSample>& samples,
                             const TitleVocab& title_vocab,
                             const DetectorConfig& cfg, const TrainOptions& opts,
                             TrainLog* log) {
  if (samples.empty()) throw DataError("detector training: empty corpus");
  std::array<double, 2> weights = class_weights(samples);

  std::vector<std::string> texts;
  texts.reserve(samples.size());
  for (const auto& s : samples) texts.push_back(s.text);
  CharVocab chars = CharVocab::build(texts);

  nn::Rng rng(opts.seed);
  DetectorModel model(cfg, std::move(chars), title_vocab, rng);

  std::vector<EncodedSample> encoded;
  encoded.reserve(samples.size());
  for (const auto& s : samples) {
    encoded.push_back({encode_chars(normalize_text(s.text), model.char_vocab(),
                                    cfg.max_chars),
                       &s.features, s.label});
  }

  // stratified validation split
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < encoded.size(); ++i) {
    by_class[static_cast<size_t>(encoded[i].label)].push_back(i);
  }
  std::vector<size_t> train_idx, val_idx;
  for (auto& idx : by_class) {
    rng.shuffle(idx);
    size_t n_val = static_cast<size_t>(std::floor(opts.val_fraction *
                                                  static_cast<double>(idx.size())));
    for (size_t i = 0; i < idx.size(); ++i) {
      (i < n_val ? val_idx : train_idx).push_back(idx[i]);
    }
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());

  std::vector<nn::ParamRef> params = model.params();
  nn::AdamState adam;
  nn::AdamConfig adam_cfg;
  adam_cfg.learning_rate = opts.learning_rate;

  auto eval_loss = [&](const std::vector<size_t>& idx) {
    double loss = 0;
    for (size_t i : idx) {
      const auto& s = encoded[i];
      auto probs = model.forward(s.char_indices, *s.features);
      loss += -weights[static_cast<size_t>(s.label)] *
              std::log(std::max(probs[static_cast<size_t>(s.label)], 1e-12));
    }
    return idx.empty() ? 0.0 : loss / static_cast<double>(idx.size());
  };

  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = -1, stale = 0;
  std::vector<nn::Tensor> best_weights;

  DetectorModel::ForwardCache cache;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::vector<size_t> order = train_idx;
    rng.shuffle(order);
    double epoch_loss = 0;
    for (size_t pos = 0; pos < order.size();
         pos += static_cast<size_t>(opts.batch_size)) {
      size_t batch_end =
          std::min(order.size(), pos + static_cast<size_t>(opts.batch_size));
      double inv_batch = 1.0 / static_cast<double>(batch_end - pos);
      model.zero_grad();
      for (size_t bi = pos; bi < batch_end; ++bi) {
        const auto& s = encoded[order[bi]];
        auto probs = model.forward_impl(s.char_indices, *s.features, true, &rng, &cache);
        nn::Tensor probs_row = nn::Tensor::from({1, 2}, {probs[0], probs[1]});
        nn::Tensor d_logits;
        epoch_loss += nn::cross_entropy(probs_row, s.label,
                                        weights[static_cast<size_t>(s.label)],
                                        &d_logits);
        for (double& v : d_logits.data) v *= inv_batch;
        model.backward_impl(cache, d_logits);
      }
      nn::adam_step(params, adam, adam_cfg);
    }
    epoch_loss /= static_cast<double>(std::max<size_t>(order.size(), 1));
    double val_loss = val_idx.empty() ? epoch_loss : eval_loss(val_idx);
    if (log) {
      log->train_loss.push_back(epoch_loss);
      log->val_loss.push_back(val_loss);
    }
    if (val_loss < best_val - 1e-9) {
      best_val = val_loss;
      best_epoch = epoch;
      stale = 0;
      best_weights.clear();
      for (const auto& p : params) best_weights.push_back(*p.value);
    } else if (++stale > opts.patience) {
      break;
    }
  }
  if (!best_weights.empty()) {
    for (size_t i = 0; i < params.size(); ++i) *params[i].value = best_weights[i];
  }
  if (log) log->best_epoch = best_epoch;
  return model;
}

bool is_title(const DetectorModel& model, const std::string& raw_text,
              const FeatureVector& features, double threshold) {
  return model.predict(raw_text, features)[1] >= threshold;
}

// ---- persistence ------------------------------------------------------------

namespace detail {

ordered_json feature_layout_json() {
  const FeatureLayout& layout = feature_layout();
  ordered_json j;
  j["total"] = layout.total;
  j["slices"] = ordered_json::array();
  for (const auto& slice : layout.slices) {
    j["slices"].push_back({{"name", slice.name},
                           {"offset", slice.offset},
                           {"length", slice.length}});
  }
  return j;
}

void check_feature_layout(const ordered_json& j, const char* kind) {
  const FeatureLayout& layout = feature_layout();
  bool ok = j.at("total").get<int>() == layout.total &&
            j.at("slices").size() == layout.slices.size();
  if (ok) {
    for (size_t i = 0; i < layout.slices.size(); ++i) {
      const auto& js = j.at("slices").at(i);
      ok = ok && js.at("name").get<std::string>() == layout.slices[i].name &&
           js.at("offset").get<int>() == layout.slices[i].offset &&
           js.at("length").get<int>() == layout.slices[i].length;
    }
  }
  if (!ok) {
    throw ModelVersionError(std::string(kind) +
                            " bundle: feature layout does not match this build");
  }
}

}  // namespace detail

void save_detector(const std::filesystem::path& path, const DetectorModel& model) {
  DetectorModel& m = const_cast<DetectorModel&>(model);
  std::vector<std::pair<std::string, const nn::Tensor*>> tensors;
  for (const auto& p : m.params()) tensors.emplace_back(p.name, p.value);
  nn::save_weights(path, tensors);

  ordered_json j;
  j["kind"] = "detector";
  j["container_version"] = nn::kWeightsVersion;
  ordered_json jc;
  jc["max_chars"] = model.cfg_.max_chars;
  jc["char_dim"] = model.cfg_.char_dim;
  jc["convs"] = ordered_json::array();
  for (const auto& spec : model.cfg_.convs) {
    jc["convs"].push_back({spec.kernels, spec.filter, spec.pool});
  }
  jc["fc_dim"] = model.cfg_.fc_dim;
  jc["dropout"] = model.cfg_.dropout;
  j["config"] = jc;
  j["char_vocab"] = ordered_json::array();
  for (char32_t c : model.chars_.chars) {
    j["char_vocab"].push_back(static_cast<std::uint32_t>(c));
  }
  j["title_vocab"] = model.titles_.tokens;
  j["feature_layout"] = detail::feature_layout_json();
  ordered_json manifest = ordered_json::array();
  for (const auto& [name, tensor] : tensors) {
    manifest.push_back({{"name", name}, {"shape", tensor->shape}});
  }
  j["tensors"] = manifest;
  write_file(path.string() + ".json", j.dump(2) + "\n");
}

DetectorModel load_detector(const std::filesystem::path& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path.string() + ".json"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("detector sidecar: " + std::string(e.what()));
  }
  if (j.value("kind", "") != "detector") {
    throw ModelVersionError("bundle at " + path.string() + " is not a detector");
  }
  if (j.at("container_version").get<std::uint32_t>() != nn::kWeightsVersion) {
    throw ModelVersionError("detector bundle: unsupported container version");
  }
  detail::check_feature_layout(j.at("feature_layout"), "detector");

  DetectorConfig cfg;
  const auto& jc = j.at("config");
  cfg.max_chars = jc.at("max_chars").get<int>();
  cfg.char_dim = jc.at("char_dim").get<int>();
  cfg.convs.clear();
  for (const auto& spec : jc.at("convs")) {
    cfg.convs.push_back({spec.at(0).get<int>(), spec.at(1).get<int>(),
                         spec.at(2).get<int>()});
  }
  cfg.fc_dim = jc.at("fc_dim").get<int>();
  cfg.dropout = jc.at("dropout").get<double>();

  CharVocab chars;
  for (const auto& c : j.at("char_vocab")) {
    chars.chars.push_back(static_cast<char32_t>(c.get<std::uint32_t>()));
  }
  TitleVocab titles;
  titles.tokens = j.at("title_vocab").get<std::vector<std::string>>();

  nn::Rng rng(0);
  DetectorModel model(cfg, std::move(chars), std::move(titles), rng);
  auto weights = nn::load_weights(path);
  for (const auto& p : model.params()) {
    auto it = weights.find(p.name);
    if (it == weights.end()) {
      throw ModelVersionError("detector bundle: missing tensor " + p.name);
    }
    if (it->second.shape != p.value->shape) {
      throw ModelVersionError("detector bundle: tensor " + p.name + " has shape " +
                              it->second.shape_str() + ", expected " +
                              p.value->shape_str());
    }
    *p.value = std::move(it->second);
  }
  return model;
}

}  // namespace tocgen
