// Validates a JSON file against a published schema: check_schema <name> <file>.

#include <fstream>
#include <iostream>
#include <sstream>

#include "bundle_lab_cli/schema.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: check_schema <schema-name> <file>\n";
    return 2;
  }
  std::ifstream in(argv[2]);
  if (!in) {
    std::cerr << "cannot open " << argv[2] << "\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    const auto doc = bundle_lab::cli::Json::parse(buf.str());
    const auto errors = bundle_lab::cli::validate(doc, bundle_lab::cli::schema_for(argv[1]));
    for (const auto& e : errors) std::cerr << argv[2] << ": " << e << "\n";
    return errors.empty() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << argv[2] << ": " << e.what() << "\n";
    return 1;
  }
}
