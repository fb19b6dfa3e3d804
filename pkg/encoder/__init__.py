# Constraint model of surveillance plans over a fixed horizon
