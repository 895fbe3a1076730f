// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/cli.hpp"

int main(int argc, char** argv) { return dboost::cli::main(argc, argv); }
