"""Hidden-subgroup oracle with query accounting."""
