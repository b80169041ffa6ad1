# Domains package
