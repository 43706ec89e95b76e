# Status-dict tool functions shared by the CLI and the MCP server
