//! Report tree shared by all subcommands. Checks are either asserted
//! (failures drive the exit code) or informational; values are free-form.
//! Rendering is deterministic: insertion order, no timestamps, no hashes.

#[derive(Debug)]
pub enum Entry {
    Check { name: String, pass: bool, asserted: bool },
    Value { name: String, value: String },
    Section { name: String, items: Vec<Entry> },
}

#[derive(Debug, Default)]
pub struct Report {
    pub items: Vec<Entry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        self.items.push(Entry::Check { name: name.into(), pass, asserted: true });
    }

    /// Informational pass/fail: rendered like a check, ignored for exit code.
    pub fn note_check(&mut self, name: &str, pass: bool) {
        self.items.push(Entry::Check { name: name.into(), pass, asserted: false });
    }

    pub fn value(&mut self, name: &str, value: impl Into<String>) {
        self.items.push(Entry::Value { name: name.into(), value: value.into() });
    }

    pub fn section(&mut self, name: &str, body: impl FnOnce(&mut Report)) {
        let mut sub = Report::new();
        body(&mut sub);
        self.items.push(Entry::Section { name: name.into(), items: sub.items });
    }

    pub fn all_asserted_pass(&self) -> bool {
        fn walk(items: &[Entry]) -> bool {
            items.iter().all(|e| match e {
                Entry::Check { pass, asserted, .. } => !asserted || *pass,
                Entry::Value { .. } => true,
                Entry::Section { items, .. } => walk(items),
            })
        }
        walk(&self.items)
    }

    pub fn render(&self, fmt: Format) -> String {
        let mut out = String::new();
        match fmt {
            Format::Text => render_text(&self.items, 0, &mut out),
            Format::Structured => render_structured(&self.items, &mut Vec::new(), &mut out),
        }
        out
    }
}

fn render_text(items: &[Entry], depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for e in items {
        match e {
            Entry::Check { name, pass, asserted } => {
                let mark = match (pass, asserted) {
                    (true, _) => "ok  ",
                    (false, true) => "FAIL",
                    (false, false) => "no  ",
                };
                out.push_str(&format!("{pad}[{mark}] {name}\n"));
            }
            Entry::Value { name, value } => {
                out.push_str(&format!("{pad}{name} = {value}\n"));
            }
            Entry::Section { name, items } => {
                out.push_str(&format!("{pad}{name}:\n"));
                render_text(items, depth + 1, out);
            }
        }
    }
}

fn render_structured(items: &[Entry], path: &mut Vec<String>, out: &mut String) {
    let key = |path: &[String], name: &str| {
        let mut parts: Vec<&str> = path.iter().map(String::as_str).collect();
        parts.push(name);
        parts.join(".").replace(' ', "_")
    };
    for e in items {
        match e {
            Entry::Check { name, pass, .. } => {
                out.push_str(&format!("{} = {}\n", key(path, name), if *pass { "pass" } else { "fail" }));
            }
            Entry::Value { name, value } => {
                out.push_str(&format!("{} = {}\n", key(path, name), value));
            }
            Entry::Section { name, items } => {
                path.push(name.replace(' ', "_"));
                render_structured(items, path, out);
                path.pop();
            }
        }
    }
}
