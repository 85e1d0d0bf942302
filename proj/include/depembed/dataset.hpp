#pragma once

#include <string>
#include <vector>

namespace depembed {

// Binary-labeled short texts; label 1 marks the positive (depressive) class.
struct LabeledDataset {
  std::vector<std::string> texts;
  std::vector<int> labels;

  std::size_t size() const { return texts.size(); }
  std::size_t count_label(int label) const;
};

// TSV rows "label<TAB>text", label in {0,1}. Blank lines are skipped;
// anything else is a format error with the line number.
LabeledDataset load_dataset_tsv(const std::string& path);
void save_dataset_tsv(const LabeledDataset& data, const std::string& path);

}  // namespace depembed
