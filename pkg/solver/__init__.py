# SMT-LIB emission, external solver driver, enumerative oracle, model decoding
