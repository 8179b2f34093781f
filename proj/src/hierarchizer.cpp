#include "tocgen/hierarchizer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include <json.hpp>

#include "bundle_util.hpp"
#include "tocgen/errors.hpp"
#include "tocgen/layout_io.hpp"
#include "tocgen/nn/serialize.hpp"
#include "tocgen/text_norm.hpp"

namespace tocgen {

using nlohmann::ordered_json;

TemplateFeature template_feature_disabled() {
  TemplateFeature f{};
  f[kTemplateSlots - 1] = 1.0;
  return f;
}

// ---- WordVocab ---------------------------------------------------------------

std::vector<std::string> tokenize_words(const std::string& s) {
  std::string norm = normalize_text(s);
  std::u32string cps = decode_utf8(norm);
  for (char32_t& c : cps) c = to_lower_cp(c);
  norm = encode_utf8(cps);
  std::vector<std::string> tokens;
  size_t pos = 0;
  while (pos < norm.size()) {
    size_t next = norm.find(' ', pos);
    if (next == std::string::npos) next = norm.size();
    if (next > pos) tokens.push_back(norm.substr(pos, next - pos));
    pos = next + 1;
  }
  return tokens;
}

WordVocab WordVocab::build(const std::vector<std::string>& titles, int min_freq) {
  std::map<std::string, long> freq;
  for (const auto& title : titles) {
    for (const auto& token : tokenize_words(title)) ++freq[token];
  }
  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  WordVocab vocab;
  for (const auto& [token, count] : ranked) {
    if (count < min_freq) break;
    vocab.tokens.push_back(token);
  }
  return vocab;
}

int WordVocab::index_of(const std::string& token) const {
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == token) return static_cast<int>(i) + 2;
  }
  return 1;  // <unk>
}

// ---- model -------------------------------------------------------------------

struct HierModel::TitleCache {
  std::vector<int> word_indices;
  nn::Tensor embedded;
  std::vector<nn::Conv1D::Cache> conv;
  std::vector<nn::MaxPool1D::Cache> pool;
  std::vector<int> pooled_rows;
  nn::Dense::Cache fc1;
  nn::Tensor hidden_relu;
  nn::Tensor dropout_mask;
};

struct HierModel::DocCache {
  std::vector<TitleCache> titles;
  nn::Tensor doc_matrix;
  nn::BiLstm::Cache lstm;
  nn::Dense::Cache emit;
  nn::CrfGrads crf_grads;
};

HierModel::HierModel(HierConfig cfg, WordVocab words, TitleVocab titles, nn::Rng& rng)
    : cfg_(std::move(cfg)), words_(std::move(words)), titles_(std::move(titles)) {
  if (cfg_.num_levels < 1 || cfg_.num_levels > 6) {
    throw DataError("hierarchizer: num_levels must lie in 1..6");
  }
  for (const auto& spec : cfg_.convs) {
    if (cfg_.max_words < spec.filter) {
      throw DataError("hierarchizer: l_w shorter than filter width");
    }
  }
  feature_dim_ = feature_layout().total;
  for (size_t i = 0; i < words_.tokens.size(); ++i) {
    word_index_.emplace(words_.tokens[i], static_cast<int>(i) + 2);
  }
  emb_ = nn::Embedding(words_.size(), cfg_.word_dim);
  init_orthogonal(emb_.table, rng);
  flat_dim_ = 0;
  for (const auto& spec : cfg_.convs) {
    convs_.emplace_back(cfg_.word_dim, spec.kernels, spec.filter, rng);
    flat_dim_ += spec.kernels *
                 nn::conv_maxpool_out_len(cfg_.max_words, spec.filter, spec.pool);
  }
  fc1_ = nn::Dense(flat_dim_, cfg_.fc_dim, rng);
  title_dim_ = cfg_.fc_dim + feature_dim_ + kTemplateSlots;
  lstm_ = nn::BiLstm(title_dim_, cfg_.lstm_units, cfg_.recurrent_dropout, rng);
  emit_ = nn::Dense(2 * cfg_.lstm_units, cfg_.num_levels, rng);
  crf_ = nn::CrfParams(cfg_.num_levels);
  crf_gt_ = nn::Tensor({cfg_.num_levels, cfg_.num_levels});
  crf_gs_ = nn::Tensor({cfg_.num_levels});
  crf_ge_ = nn::Tensor({cfg_.num_levels});
}

nn::Tensor HierModel::encode_title_impl(const TitleSample& title, bool train,
                                        nn::Rng* rng, TitleCache* cache) const {
  if (static_cast<int>(title.features.values.size()) != feature_dim_) {
    throw ModelVersionError("hierarchizer: feature vector length " +
                            std::to_string(title.features.values.size()) +
                            " does not match model layout (" +
                            std::to_string(feature_dim_) + ")");
  }
  std::vector<int> indices(static_cast<size_t>(cfg_.max_words), 0);
  std::vector<std::string> tokens = tokenize_words(title.text);
  for (int i = 0; i < cfg_.max_words && i < static_cast<int>(tokens.size()); ++i) {
    auto it = word_index_.find(tokens[static_cast<size_t>(i)]);
    indices[static_cast<size_t>(i)] = it == word_index_.end() ? 1 : it->second;
  }
  nn::Tensor embedded = emb_.forward(indices);

  nn::Tensor flat({1, flat_dim_});
  int offset = 0;
  if (cache) {
    cache->word_indices = indices;
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

  nn::Tensor vec({1, title_dim_});
  std::copy(dropped.data.begin(), dropped.data.end(), vec.data.begin());
  std::copy(title.features.values.begin(), title.features.values.end(),
            vec.data.begin() + cfg_.fc_dim);
  std::copy(title.template_feature.begin(), title.template_feature.end(),
            vec.data.begin() + cfg_.fc_dim + feature_dim_);
  return vec;
}

nn::Tensor HierModel::encode_title(const TitleSample& title) const {
  return encode_title_impl(title, false, nullptr, nullptr);
}

nn::Tensor HierModel::build_document_matrix(const DocTitleSeq& titles) const {
  if (titles.empty()) throw DataError("document matrix: empty title sequence");
  nn::Tensor m({static_cast<int>(titles.size()), title_dim_});
  for (size_t i = 0; i < titles.size(); ++i) {
    nn::Tensor row = encode_title(titles[i]);
    std::copy(row.data.begin(), row.data.end(),
              m.data.begin() + static_cast<size_t>(i) * title_dim_);
  }
  return m;
}

std::vector<int> HierModel::get_hierarchy(const nn::Tensor& doc_matrix) const {
  nn::Tensor h = lstm_.forward(doc_matrix);
  nn::Tensor emissions = emit_.forward(h);
  std::vector<int> labels = nn::crf_viterbi(emissions, crf_);
  for (int& l : labels) ++l;  // label index -> level
  return labels;
}

std::vector<int> HierModel::predict_levels(const DocTitleSeq& titles) const {
  if (titles.empty()) return {};
  return get_hierarchy(build_document_matrix(titles));
}

double HierModel::doc_nll(const DocTitleSeq& titles, const std::vector<int>& labels,
                          bool train, nn::Rng* rng, DocCache* cache) {
  int n = static_cast<int>(titles.size());
  nn::Tensor m({n, title_dim_});
  if (cache) cache->titles.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    nn::Tensor row = encode_title_impl(titles[static_cast<size_t>(i)], train, rng,
                                       cache ? &cache->titles[static_cast<size_t>(i)]
                                             : nullptr);
    std::copy(row.data.begin(), row.data.end(),
              m.data.begin() + static_cast<size_t>(i) * title_dim_);
  }
  if (cache) cache->doc_matrix = std::move(m);
  const nn::Tensor& doc_matrix = cache ? cache->doc_matrix : m;
  nn::Tensor h = lstm_.forward(doc_matrix, train, rng, cache ? &cache->lstm : nullptr);
  nn::Tensor emissions = emit_.forward(h, cache ? &cache->emit : nullptr);
  return nn::crf_nll(emissions, labels, crf_, cache ? &cache->crf_grads : nullptr);
}

void HierModel::doc_backward(const DocCache& cache, double scale) {
  const nn::CrfGrads& cg = cache.crf_grads;
  for (size_t i = 0; i < crf_gt_.data.size(); ++i) {
    crf_gt_.data[i] += scale * cg.d_transitions.data[i];
  }
  for (size_t i = 0; i < crf_gs_.data.size(); ++i) {
    crf_gs_.data[i] += scale * cg.d_start.data[i];
    crf_ge_.data[i] += scale * cg.d_end.data[i];
  }
  nn::Tensor d_emissions = cg.d_emissions;
  for (double& v : d_emissions.data) v *= scale;
  nn::Tensor d_h = emit_.backward(cache.emit, d_emissions);
  nn::Tensor d_m = lstm_.backward(cache.lstm, d_h);
  for (size_t i = 0; i < cache.titles.size(); ++i) {
    const TitleCache& tc = cache.titles[i];
    nn::Tensor d_dropped({1, cfg_.fc_dim});
    std::copy_n(d_m.data.begin() + i * static_cast<size_t>(title_dim_), cfg_.fc_dim,
                d_dropped.data.begin());
    nn::Tensor d_hidden_relu = nn::dropout_backward(tc.dropout_mask, d_dropped);
    nn::Tensor d_hidden = nn::relu_backward(tc.hidden_relu, d_hidden_relu);
    nn::Tensor d_flat = fc1_.backward(tc.fc1, d_hidden);
    nn::Tensor d_embedded({tc.embedded.rows(), tc.embedded.cols()});
    int offset = 0;
    for (size_t k = 0; k < convs_.size(); ++k) {
      int rows = tc.pooled_rows[k];
      int cols = cfg_.convs[k].kernels;
      nn::Tensor d_pooled({rows, cols});
      std::copy_n(d_flat.data.begin() + offset, static_cast<size_t>(rows) * cols,
                  d_pooled.data.begin());
      offset += rows * cols;
      nn::MaxPool1D pooler{cfg_.convs[k].pool};
      nn::Tensor d_conv = pooler.backward(tc.pool[k], d_pooled, cols);
      nn::Tensor d_emb_part = convs_[k].backward(tc.conv[k], d_conv);
      for (size_t j = 0; j < d_embedded.data.size(); ++j) {
        d_embedded.data[j] += d_emb_part.data[j];
      }
    }
    emb_.backward(tc.word_indices, d_embedded);
  }
}

void HierModel::zero_grad() {
  emb_.zero_grad();
  for (auto& conv : convs_) conv.zero_grad();
  fc1_.zero_grad();
  lstm_.zero_grad();
  emit_.zero_grad();
  crf_gt_.zero();
  crf_gs_.zero();
  crf_ge_.zero();
}

std::vector<nn::ParamRef> HierModel::params() {
  std::vector<nn::ParamRef> out = emb_.params("emb");
  for (size_t k = 0; k < convs_.size(); ++k) {
    for (auto& p : convs_[k].params("conv" + std::to_string(k))) out.push_back(p);
  }
  for (auto& p : fc1_.params("fc1")) out.push_back(p);
  for (auto& p : lstm_.params("lstm")) out.push_back(p);
  for (auto& p : emit_.params("emit")) out.push_back(p);
  out.push_back({"crf.transitions", &crf_.transitions, &crf_gt_});
  out.push_back({"crf.start", &crf_.start, &crf_gs_});
  out.push_back({"crf.end", &crf_.end, &crf_ge_});
  return out;
}

// ---- training ----------------------------------------------------------------

namespace {

struct TrainSeq {
  const DocTitleSeq* doc;
  int begin = 0, end = 0;  // window into the document
};

std::vector<int> window_labels(const DocTitleSeq& doc, int begin, int end) {
  std::vector<int> labels;
  labels.reserve(static_cast<size_t>(end - begin));
  for (int i = begin; i < end; ++i) {
    int level = doc[static_cast<size_t>(i)].gold_level;
    if (level < 1) throw DataError("hierarchizer training: missing gold level");
    labels.push_back(level - 1);
  }
  return labels;
}

DocTitleSeq slice_doc(const DocTitleSeq& doc, int begin, int end) {
  return DocTitleSeq(doc.begin() + begin, doc.begin() + end);
}

}  // namespace

HierModel train_hierarchizer(const std::vector<DocTitleSeq>& docs,
                             const TitleVocab& title_vocab, const HierConfig& cfg,
                             const TrainOptions& opts, TrainLog* log) {
  std::vector<const DocTitleSeq*> usable;
  for (const auto& doc : docs) {
    if (doc.empty()) {
      std::cerr << "warning: skipping training document with zero titles\n";
      continue;
    }
    for (const auto& t : doc) {
      if (t.gold_level < 1 || t.gold_level > cfg.num_levels) {
        throw DataError("hierarchizer training: gold level " +
                        std::to_string(t.gold_level) + " outside 1.." +
                        std::to_string(cfg.num_levels));
      }
    }
    usable.push_back(&doc);
  }
  if (usable.empty()) {
    throw DataError("hierarchizer training: no documents with titles");
  }

  std::vector<std::string> all_titles;
  for (const auto* doc : usable) {
    for (const auto& t : *doc) all_titles.push_back(t.text);
  }
  WordVocab words = WordVocab::build(all_titles);

  nn::Rng rng(opts.seed);
  HierModel model(cfg, std::move(words), title_vocab, rng);

  // split whole documents into train/val
  std::vector<size_t> doc_order(usable.size());
  for (size_t i = 0; i < doc_order.size(); ++i) doc_order[i] = i;
  rng.shuffle(doc_order);
  size_t n_val = static_cast<size_t>(std::floor(opts.val_fraction *
                                                static_cast<double>(usable.size())));
  std::vector<const DocTitleSeq*> train_docs, val_docs;
  for (size_t i = 0; i < doc_order.size(); ++i) {
    (i < n_val ? val_docs : train_docs).push_back(usable[doc_order[i]]);
  }

  // long documents become overlapping windows at train time
  std::vector<TrainSeq> sequences;
  for (const auto* doc : train_docs) {
    int n = static_cast<int>(doc->size());
    if (n <= cfg.train_window) {
      sequences.push_back({doc, 0, n});
    } else {
      int step = cfg.train_window - cfg.window_overlap;
      for (int begin = 0; begin < n; begin += step) {
        int end = std::min(n, begin + cfg.train_window);
        sequences.push_back({doc, begin, end});
        if (end == n) break;
      }
    }
  }

  std::vector<nn::ParamRef> params = model.params();
  nn::AdamState adam;
  nn::AdamConfig adam_cfg;
  adam_cfg.learning_rate = opts.learning_rate;

  auto eval_nll = [&](const std::vector<const DocTitleSeq*>& split) {
    double total = 0;
    long titles = 0;
    for (const auto* doc : split) {
      total += model.doc_nll(*doc, window_labels(*doc, 0, static_cast<int>(doc->size())),
                             false, nullptr, nullptr);
      titles += static_cast<long>(doc->size());
    }
    return titles > 0 ? total / static_cast<double>(titles) : 0.0;
  };

  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = -1, stale = 0;
  std::vector<nn::Tensor> best_weights;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::vector<size_t> order(sequences.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    double epoch_loss = 0;
    long epoch_titles = 0;
    for (size_t pos = 0; pos < order.size();
         pos += static_cast<size_t>(opts.batch_size)) {
      size_t batch_end =
          std::min(order.size(), pos + static_cast<size_t>(opts.batch_size));
      double inv_batch = 1.0 / static_cast<double>(batch_end - pos);
      model.zero_grad();
      for (size_t bi = pos; bi < batch_end; ++bi) {
        const TrainSeq& seq = sequences[order[bi]];
        DocTitleSeq window = slice_doc(*seq.doc, seq.begin, seq.end);
        std::vector<int> labels = window_labels(*seq.doc, seq.begin, seq.end);
        HierModel::DocCache cache;
        epoch_loss += model.doc_nll(window, labels, true, &rng, &cache);
        epoch_titles += static_cast<long>(labels.size());
        model.doc_backward(cache, inv_batch);
      }
      nn::adam_step(params, adam, adam_cfg);
    }
    double train_loss =
        epoch_titles > 0 ? epoch_loss / static_cast<double>(epoch_titles) : 0.0;
    double val_loss = val_docs.empty() ? train_loss : eval_nll(val_docs);
    if (log) {
      log->train_loss.push_back(train_loss);
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

// ---- persistence ---------------------------------------------------------------

void save_hierarchizer(const std::filesystem::path& path, const HierModel& model) {
  HierModel& m = const_cast<HierModel&>(model);
  std::vector<std::pair<std::string, const nn::Tensor*>> tensors;
  for (const auto& p : m.params()) tensors.emplace_back(p.name, p.value);
  nn::save_weights(path, tensors);

  ordered_json j;
  j["kind"] = "hierarchizer";
  j["container_version"] = nn::kWeightsVersion;
  ordered_json jc;
  jc["max_words"] = model.cfg_.max_words;
  jc["word_dim"] = model.cfg_.word_dim;
  jc["convs"] = ordered_json::array();
  for (const auto& spec : model.cfg_.convs) {
    jc["convs"].push_back({spec.kernels, spec.filter, spec.pool});
  }
  jc["fc_dim"] = model.cfg_.fc_dim;
  jc["dropout"] = model.cfg_.dropout;
  jc["lstm_units"] = model.cfg_.lstm_units;
  jc["recurrent_dropout"] = model.cfg_.recurrent_dropout;
  jc["num_levels"] = model.cfg_.num_levels;
  jc["train_window"] = model.cfg_.train_window;
  jc["window_overlap"] = model.cfg_.window_overlap;
  j["config"] = jc;
  j["word_vocab"] = model.words_.tokens;
  j["title_vocab"] = model.titles_.tokens;
  j["feature_layout"] = detail::feature_layout_json();
  ordered_json manifest = ordered_json::array();
  for (const auto& [name, tensor] : tensors) {
    manifest.push_back({{"name", name}, {"shape", tensor->shape}});
  }
  j["tensors"] = manifest;
  write_file(path.string() + ".json", j.dump(2) + "\n");
}

HierModel load_hierarchizer(const std::filesystem::path& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path.string() + ".json"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("hierarchizer sidecar: " + std::string(e.what()));
  }
  if (j.value("kind", "") != "hierarchizer") {
    throw ModelVersionError("bundle at " + path.string() + " is not a hierarchizer");
  }
  if (j.at("container_version").get<std::uint32_t>() != nn::kWeightsVersion) {
    throw ModelVersionError("hierarchizer bundle: unsupported container version");
  }
  detail::check_feature_layout(j.at("feature_layout"), "hierarchizer");

  HierConfig cfg;
  const auto& jc = j.at("config");
  cfg.max_words = jc.at("max_words").get<int>();
  cfg.word_dim = jc.at("word_dim").get<int>();
  cfg.convs.clear();
  for (const auto& spec : jc.at("convs")) {
    cfg.convs.push_back({spec.at(0).get<int>(), spec.at(1).get<int>(),
                         spec.at(2).get<int>()});
  }
  cfg.fc_dim = jc.at("fc_dim").get<int>();
  cfg.dropout = jc.at("dropout").get<double>();
  cfg.lstm_units = jc.at("lstm_units").get<int>();
  cfg.recurrent_dropout = jc.at("recurrent_dropout").get<double>();
  cfg.num_levels = jc.at("num_levels").get<int>();
  cfg.train_window = jc.at("train_window").get<int>();
  cfg.window_overlap = jc.at("window_overlap").get<int>();

  WordVocab words;
  words.tokens = j.at("word_vocab").get<std::vector<std::string>>();
  TitleVocab titles;
  titles.tokens = j.at("title_vocab").get<std::vector<std::string>>();

  nn::Rng rng(0);
  HierModel model(cfg, std::move(words), std::move(titles), rng);
  auto weights = nn::load_weights(path);
  for (const auto& p : model.params()) {
    auto it = weights.find(p.name);
    if (it == weights.end()) {
      throw ModelVersionError("hierarchizer bundle: missing tensor " + p.name);
    }
    if (it->second.shape != p.value->shape) {
      throw ModelVersionError("hierarchizer bundle: tensor " + p.name +
                              " has shape " + it->second.shape_str() +
                              ", expected " + p.value->shape_str());
    }
    *p.value = std::move(it->second);
  }
  return model;
}

}  // namespace tocgen
