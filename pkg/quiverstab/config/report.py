# report layout

# ---------------------------------------------------------
# Logging
# ---------------------------------------------------------
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# ---------------------------------------------------------
# Plain-text reports
# ---------------------------------------------------------
REPORT_KEY_WIDTH = 28
REPORT_SEPARATOR = "="
TABLE_SEPARATOR = " | "

# ---------------------------------------------------------
# Output formats
# ---------------------------------------------------------
VALID_FORMATS = ["text", "json", "csv"]
CSV_LIST_SEPARATOR = ";"
JSON_INDENT = 2
