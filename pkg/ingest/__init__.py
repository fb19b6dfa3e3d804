# Scenario input: data model, text format, tiny-instance generator
