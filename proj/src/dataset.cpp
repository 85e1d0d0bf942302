#include "depembed/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace depembed {

std::size_t LabeledDataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

LabeledDataset load_dataset_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  LabeledDataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected \"label<TAB>text\"");
    std::string label = line.substr(0, tab);
    if (label != "0" && label != "1")
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
    data.labels.push_back(label == "1" ? 1 : 0);
    data.texts.push_back(line.substr(tab + 1));
  }
  return data;
}

void save_dataset_tsv(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  for (std::size_t i = 0; i < data.size(); ++i)
    out << data.labels[i] << '\t' << data.texts[i] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace depembed
