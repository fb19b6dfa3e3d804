# Qualitative criticality levels from performance indices
