#include "tabtree/inversion.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "tabtree/stages.hpp"

namespace tabtree {

namespace {

const SourceColumnRecord* find_record(const PipelineStore& store, const std::string& header) {
    for (const auto& s : store.sources) {
        if (s.header == header) return &s;
    }
    if (store.labels && store.labels->header == header) return &*store.labels;
    return nullptr;
}

const FittedColumnBasis* basis_by_header(const SourceColumnRecord& record,
                                         const std::string& returned_header) {
    for (const auto& b : record.bases) {
        if (b.returned_header == returned_header) return &b;
    }
    return nullptr;
}

// Parent of a basis: the basis whose suffix chain is this one's minus the
// last element. A one-element chain roots at the source itself.
const FittedColumnBasis* parent_basis(const SourceColumnRecord& record,
                                      const FittedColumnBasis& basis) {
    if (basis.suffix_chain.size() <= 1) return nullptr;
    std::vector<std::string> parent_chain(basis.suffix_chain.begin(),
                                          basis.suffix_chain.end() - 1);
    std::string parent_header = join_header(basis.source_header, parent_chain);
    return basis_by_header(record, parent_header);
}

struct PathBuild {
    std::vector<InversionPath> paths;
    std::string first_blocker;  // category that broke the first candidate
};

PathBuild build_paths(const PipelineStore& store, const SourceColumnRecord& record) {
    PathBuild out;
    // A raw retained source column is its own zero-length recovery.
    for (const auto& group : record.retained_groups) {
        if (group == record.header) {
            InversionPath p;
            p.source_header = record.header;
            p.full_information = true;
            p.length = 0;
            out.paths.push_back(std::move(p));
            break;
        }
    }

    std::vector<std::string> seen;
    for (const auto& group : record.retained_groups) {
        if (group == record.header) continue;
        if (std::find(seen.begin(), seen.end(), group) != seen.end()) continue;
        seen.push_back(group);
        const FittedColumnBasis* leaf = basis_by_header(record, group);
        if (!leaf) continue;

        InversionPath p;
        p.source_header = record.header;
        p.full_information = true;
        bool invertible = true;
        for (const FittedColumnBasis* step = leaf; step != nullptr;
             step = parent_basis(record, *step)) {
            if (!store.registry.contains(step->category_id)) {
                invertible = false;
                if (out.first_blocker.empty()) out.first_blocker = step->category_id;
                break;
            }
            const ProcessEntry& pe = store.registry.at(step->category_id).process;
            bool multi_intermediate = step != leaf && step->column_count > 1;
            if (pe.invert_fn.empty() || multi_intermediate) {
                invertible = false;
                if (out.first_blocker.empty()) out.first_blocker = step->category_id;
                break;
            }
            p.basis_chain.push_back(step->returned_header);
            if (pe.invert_fn != "identity") ++p.length;
            if (!pe.full_information) p.full_information = false;
        }
        if (invertible) out.paths.push_back(std::move(p));
    }

    std::stable_sort(out.paths.begin(), out.paths.end(),
                     [](const InversionPath& a, const InversionPath& b) {
                         if (a.full_information != b.full_information) return a.full_information;
                         return a.length < b.length;
                     });
    return out;
}

}  // namespace

std::vector<InversionPath> build_inversion_paths(const PipelineStore& store,
                                                 const std::string& source_header) {
    const SourceColumnRecord* record = find_record(store, source_header);
    if (!record) {
        throw std::runtime_error("inversion: unknown source column '" + source_header + "'");
    }
    PathBuild build = build_paths(store, *record);
    if (build.paths.empty()) {
        std::string blocker = build.first_blocker.empty() ? "?" : build.first_blocker;
        throw std::runtime_error("inversion: no invertible path for '" + source_header +
                                 "'; blocked by category '" + blocker + "'");
    }
    return build.paths;
}

InvertResult invert(const PipelineStore& store, const Table& data, InvertTarget target) {
    std::vector<const SourceColumnRecord*> records;
    if (target == InvertTarget::labels) {
        if (!store.labels) {
            throw std::runtime_error("inversion: the pipeline was fitted without labels");
        }
        records.push_back(&*store.labels);
    } else {
        for (const auto& s : store.sources) records.push_back(&s);
    }

    InvertResult result;
    for (const SourceColumnRecord* record : records) {
        InversionReportEntry entry;
        entry.source_header = record->header;

        PathBuild build = build_paths(store, *record);
        if (build.paths.empty()) {
            std::string blocker = build.first_blocker.empty() ? "?" : build.first_blocker;
            throw std::runtime_error("inversion: no invertible path for '" + record->header +
                                     "'; blocked by category '" + blocker + "'");
        }

        const InversionPath* chosen = nullptr;
        std::vector<std::string> absent;
        for (const auto& path : build.paths) {
            std::vector<std::string> required;
            if (path.basis_chain.empty()) {
                required.push_back(record->header);
            } else {
                const FittedColumnBasis* leaf = basis_by_header(*record, path.basis_chain.front());
                required = leaf->output_headers();
            }
            std::size_t present = 0;
            std::vector<std::string> missing;
            for (const auto& h : required) {
                if (data.find(h)) {
                    ++present;
                } else {
                    missing.push_back(h);
                }
            }
            if (present == required.size()) {
                chosen = &path;
                break;
            }
            if (present > 0 && absent.empty()) absent = missing;
        }

        if (!chosen) {
            if (!absent.empty()) {
                std::string msg = "inversion: column group for '" + record->header +
                                  "' is only partially present; missing:";
                for (const auto& h : absent) msg += " '" + h + "'";
                throw std::runtime_error(msg);
            }
            entry.recovered = false;
            entry.note = "no returned columns present in the provided data";
            result.report.push_back(std::move(entry));
            continue;
        }

        entry.full_information = chosen->full_information;
        std::vector<CellValue> cells;
        if (chosen->basis_chain.empty()) {
            cells = data.find(record->header)->cells;
            entry.path.push_back("(passthrough)");
        } else {
            const FittedColumnBasis* leaf = basis_by_header(*record, chosen->basis_chain.front());
            std::vector<const ColumnData*> group;
            for (const auto& h : leaf->output_headers()) group.push_back(data.find(h));
            const ProcessEntry& leaf_pe = store.registry.at(leaf->category_id).process;
            cells = stage_invert(leaf_pe.invert_fn, leaf->stats, group);
            entry.path.push_back(leaf->category_id);

            for (std::size_t i = 1; i < chosen->basis_chain.size(); ++i) {
                const FittedColumnBasis* step = basis_by_header(*record, chosen->basis_chain[i]);
                const ProcessEntry& pe = store.registry.at(step->category_id).process;
                ColumnData tmp;
                tmp.header = step->returned_header;
                tmp.cells = std::move(cells);
                cells = stage_invert(pe.invert_fn, step->stats, {&tmp});
                entry.path.push_back(step->category_id);
            }
        }

        ColumnData recovered;
        recovered.header = record->header;
        recovered.cells = std::move(cells);
        result.recovered.columns.push_back(std::move(recovered));
        result.recovered_list.push_back(record->header);
        entry.recovered = true;
        result.report.push_back(std::move(entry));
    }
    return result;
}

}  // namespace tabtree
