# Sixj Package
