use std::collections::HashSet;
use std::path::Path;

use log::debug;
use url::Url;

use crate::error::{Error, Result};

/// Hosts, host suffixes, and URL substrings to reject. All entries are
/// lowercase; suffixes start with a dot.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UrlBlocklist {
    pub exact_hosts: HashSet<String>,
    pub host_suffixes: HashSet<String>,
    pub substrings: HashSet<String>,
}

impl UrlBlocklist {
    /// Parses the line format: `host:`, `suffix:` or `sub:` prefixes route
    /// an entry to its set, bare entries are hosts, `#` starts a comment.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut list = UrlBlocklist::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (set, entry) = if let Some(rest) = line.strip_prefix("suffix:") {
                let mut s = rest.trim().to_lowercase();
                if !s.starts_with('.') {
                    s.insert(0, '.');
                }
                (&mut list.host_suffixes, s)
            } else if let Some(rest) = line.strip_prefix("sub:") {
                (&mut list.substrings, rest.trim().to_lowercase())
            } else {
                let rest = line.strip_prefix("host:").unwrap_or(line);
                (&mut list.exact_hosts, rest.trim().to_lowercase())
            };
            if entry.is_empty() || entry == "." {
                return Err(format!("line {}: empty entry", i + 1));
            }
            set.insert(entry);
        }
        Ok(list)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|message| Error::InvalidDataFile {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.exact_hosts.is_empty() && self.host_suffixes.is_empty() && self.substrings.is_empty()
    }
}

/// Unparsable URLs count as blocked.
pub fn url_blocked(url: &str, blocklist: &UrlBlocklist) -> bool {
    if blocklist.is_empty() {
        return false;
    }
    let lowered = url.trim().to_lowercase();
    if blocklist.substrings.iter().any(|s| lowered.contains(s.as_str())) {
        return true;
    }
    let parsed = if lowered.contains("://") {
        Url::parse(&lowered)
    } else {
        Url::parse(&format!("http://{lowered}"))
    };
    let host = match parsed.as_ref().ok().and_then(|u| u.host_str()) {
        Some(h) => h.trim_end_matches('.'),
        None => {
            debug!("unparsable URL treated as blocked: {url:?}");
            return true;
        }
    };
    blocklist.exact_hosts.contains(host)
        || blocklist
            .host_suffixes
            .iter()
            .any(|suffix| host.ends_with(suffix.as_str()))
}
