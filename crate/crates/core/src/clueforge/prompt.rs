use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ClueError, ClueRequest};

/// Placeholder names a template body may reference.
pub const PLACEHOLDERS: [&str; 4] = ["text", "answer", "category", "n"];

/// A prompt body with `{text}`, `{answer}`, `{category}` and `{n}` slots.
///
/// Braces around any other name are literal text. Each placeholder may occur
/// at most once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTemplate", into = "RawTemplate")]
pub struct PromptTemplate {
    id: String,
    body: String,
    slots: Vec<Slot>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Slot {
    start: usize,
    end: usize,
    name: &'static str,
}

#[derive(Serialize, Deserialize)]
struct RawTemplate {
    id: String,
    body: String,
}

impl TryFrom<RawTemplate> for PromptTemplate {
    type Error = ClueError;
    fn try_from(raw: RawTemplate) -> Result<Self, ClueError> {
        PromptTemplate::new(raw.id, raw.body)
    }
}

impl From<PromptTemplate> for RawTemplate {
    fn from(t: PromptTemplate) -> Self {
        RawTemplate { id: t.id, body: t.body }
    }
}

fn scan(body: &str) -> Vec<Slot> {
    let mut slots = Vec::new();
    let mut i = 0;
    while let Some(off) = body[i..].find('{') {
        let start = i + off;
        let rest = &body[start + 1..];
        let hit = PLACEHOLDERS
            .iter()
            .find(|name| rest.starts_with(**name) && rest[name.len()..].starts_with('}'));
        match hit {
            Some(name) => {
                let end = start + name.len() + 2;
                slots.push(Slot { start, end, name });
                i = end;
            }
            None => i = start + 1,
        }
    }
    slots
}

impl PromptTemplate {
    pub fn new(id: impl Into<String>, body: impl Into<String>) -> Result<Self, ClueError> {
        let id = id.into();
        let body = body.into();
        let slots = scan(&body);
        for (k, s) in slots.iter().enumerate() {
            if slots[..k].iter().any(|o| o.name == s.name) {
                return Err(ClueError::InvalidTemplate(format!("{id}: placeholder {{{}}} occurs more than once", s.name)));
            }
        }
        Ok(Self { id, body, slots })
    }

    pub fn from_file(id: impl Into<String>, path: &Path) -> Result<Self, ClueError> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| ClueError::InvalidTemplate(format!("{}: {e}", path.display())))?;
        Self::new(id, body.trim_end())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn body(&self) -> &str {
        &self.body
    }

    /// Placeholder names in order of appearance.
    pub fn placeholders(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.slots.iter().map(|s| s.name)
    }

    pub fn references(&self, name: &str) -> bool {
        self.slots.iter().any(|s| s.name == name)
    }
}

/// Substitutes every placeholder in one pass, so field values that happen to
/// contain placeholder syntax are copied verbatim.
pub fn render_prompt(tpl: &PromptTemplate, req: &ClueRequest) -> Result<String, ClueError> {
    let n = req.n.to_string();
    let mut out = String::with_capacity(tpl.body.len() + req.text.as_deref().map_or(0, str::len));
    let mut last = 0;
    for slot in &tpl.slots {
        let value = match slot.name {
            "text" => req.text.as_deref().ok_or(ClueError::MissingField("text"))?,
            "answer" => req.answer.as_str(),
            "category" => req.category.as_deref().ok_or(ClueError::MissingField("category"))?,
            _ => n.as_str(),
        };
        out.push_str(&tpl.body[last..slot.start]);
        out.push_str(value);
        last = slot.end;
    }
    out.push_str(&tpl.body[last..]);
    Ok(out)
}

/// The prompts a remote provider chooses between, keyed by which request
/// fields are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateSet {
    pub system: String,
    pub answer: PromptTemplate,
    pub text: PromptTemplate,
    pub text_category: PromptTemplate,
}

impl Default for TemplateSet {
    /// Turkish instruction prompts written for this crate; replace them with
    /// [`TemplateSet::load_dir`] to use different wording.
    fn default() -> Self {
        let t = |id: &str, body: &str| PromptTemplate::new(id, body.trim_end()).expect("bundled template is valid");
        Self {
            system: include_str!("../../data/prompts/system.txt").trim_end().to_string(),
            answer: t("answer", include_str!("../../data/prompts/answer.txt")),
            text: t("text", include_str!("../../data/prompts/text.txt")),
            text_category: t("text_category", include_str!("../../data/prompts/text_category.txt")),
        }
    }
}

impl TemplateSet {
    /// Reads `system.txt`, `answer.txt`, `text.txt` and `text_category.txt`;
    /// missing files keep the bundled default.
    pub fn load_dir(dir: &Path) -> Result<Self, ClueError> {
        let mut set = Self::default();
        let sys = dir.join("system.txt");
        if sys.exists() {
            set.system = std::fs::read_to_string(&sys)
                .map_err(|e| ClueError::InvalidTemplate(format!("{}: {e}", sys.display())))?
                .trim_end()
                .to_string();
        }
        for (name, slot) in [("answer", &mut set.answer), ("text", &mut set.text), ("text_category", &mut set.text_category)] {
            let path = dir.join(format!("{name}.txt"));
            if path.exists() {
                *slot = PromptTemplate::from_file(name, &path)?;
            }
        }
        Ok(set)
    }

    pub fn select(&self, req: &ClueRequest) -> &PromptTemplate {
        match (&req.text, &req.category) {
            (None, _) => &self.answer,
            (Some(_), None) => &self.text,
            (Some(_), Some(_)) => &self.text_category,
        }
    }
}
